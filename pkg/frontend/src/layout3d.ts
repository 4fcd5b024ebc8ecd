/** Deterministic 3D force layout plus a simple perspective projection.
 *
 * Initial positions derive from node-id hashes, so the same snapshot always
 * unfolds from the same arrangement; the force pass is a fixed number of
 * spring/repulsion iterations, presentation-only and never persisted.
 */

import type { GraphEdge } from './types.js';

export interface Point3 {
  x: number;
  y: number;
  z: number;
}

export interface Projected {
  x: number;
  y: number;
  scale: number;
  depth: number;
}

function hash32(text: string): number {
  let value = 2166136261;
  for (let i = 0; i < text.length; i++) {
    value ^= text.charCodeAt(i);
    value = Math.imul(value, 16777619);
  }
  return value >>> 0;
}

export function seededPosition(id: string): Point3 {
  const h1 = hash32(id);
  const h2 = hash32(id + '');
  const h3 = hash32(id + '');
  return {
    x: (h1 / 0xffffffff) * 2 - 1,
    y: (h2 / 0xffffffff) * 2 - 1,
    z: (h3 / 0xffffffff) * 2 - 1,
  };
}

export function computeLayout(
  nodeIds: string[],
  edges: Array<Pick<GraphEdge, 'source' | 'target' | 'is_self_loop'>>,
  iterations = 60,
): Map<string, Point3> {
  const positions = new Map<string, Point3>(nodeIds.map((id) => [id, seededPosition(id)]));
  const links = edges.filter((e) => !e.is_self_loop && e.source !== e.target);
  const ids = [...nodeIds].sort();
  const repulsion = 0.08 / Math.max(1, Math.sqrt(ids.length));
  const spring = 0.05;
  const restLength = 0.6;

  for (let step = 0; step < iterations; step++) {
    const force = new Map<string, Point3>(ids.map((id) => [id, { x: 0, y: 0, z: 0 }]));
    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const a = positions.get(ids[i])!;
        const b = positions.get(ids[j])!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const dz = a.z - b.z;
        const distSq = dx * dx + dy * dy + dz * dz + 1e-6;
        const push = repulsion / distSq;
        const fa = force.get(ids[i])!;
        const fb = force.get(ids[j])!;
        fa.x += dx * push;
        fa.y += dy * push;
        fa.z += dz * push;
        fb.x -= dx * push;
        fb.y -= dy * push;
        fb.z -= dz * push;
      }
    }
    for (const edge of links) {
      const a = positions.get(edge.source);
      const b = positions.get(edge.target);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dz = b.z - a.z;
      const dist = Math.sqrt(dx * dx + dy * dy + dz * dz) + 1e-6;
      const pull = spring * (dist - restLength);
      const fa = force.get(edge.source)!;
      const fb = force.get(edge.target)!;
      fa.x += (dx / dist) * pull;
      fa.y += (dy / dist) * pull;
      fa.z += (dz / dist) * pull;
      fb.x -= (dx / dist) * pull;
      fb.y -= (dy / dist) * pull;
      fb.z -= (dz / dist) * pull;
    }
    const damping = 1 - step / (iterations * 1.2);
    for (const id of ids) {
      const p = positions.get(id)!;
      const f = force.get(id)!;
      p.x += f.x * damping;
      p.y += f.y * damping;
      p.z += f.z * damping;
    }
  }
  return positions;
}

/** Rotate by camera angles, then project with a fixed-distance perspective. */
export function project(
  point: Point3,
  camera: { rx: number; ry: number; zoom: number },
  viewport: { width: number; height: number },
): Projected {
  const cosY = Math.cos(camera.ry);
  const sinY = Math.sin(camera.ry);
  const cosX = Math.cos(camera.rx);
  const sinX = Math.sin(camera.rx);
  const x1 = point.x * cosY + point.z * sinY;
  const z1 = -point.x * sinY + point.z * cosY;
  const y2 = point.y * cosX - z1 * sinX;
  const z2 = point.y * sinX + z1 * cosX;
  const distance = 4;
  const scale = (camera.zoom * distance) / (distance + z2);
  const half = Math.min(viewport.width, viewport.height) / 2;
  return {
    x: viewport.width / 2 + x1 * scale * half * 0.8,
    y: viewport.height / 2 + y2 * scale * half * 0.8,
    scale,
    depth: z2,
  };
}
