/** Minimal virtual-node layer.
 *
 * Views produce plain VNode trees; the browser entry point mounts them with
 * `mount`, and tests assert over the trees directly, which keeps every view
 * renderable and checkable without a DOM.
 */

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: Array<VNode | string>;
}

export type Child = VNode | string | null | undefined | false;

export function h(
  tag: string,
  attrs: Record<string, string | number | null | undefined> = {},
  ...children: Array<Child | Child[]>
): VNode {
  const cleanAttrs: Record<string, string> = {};
  for (const [key, value] of Object.entries(attrs)) {
    if (value !== null && value !== undefined) cleanAttrs[key] = String(value);
  }
  const flat: Array<VNode | string> = [];
  const push = (child: Child | Child[]): void => {
    if (Array.isArray(child)) {
      child.forEach(push);
    } else if (child !== null && child !== undefined && child !== false) {
      flat.push(child);
    }
  };
  children.forEach(push);
  return { tag, attrs: cleanAttrs, children: flat };
}

/** Depth-first collection of nodes matching a predicate. */
export function findAll(root: VNode, match: (node: VNode) => boolean): VNode[] {
  const found: VNode[] = [];
  const walk = (node: VNode): void => {
    if (match(node)) found.push(node);
    for (const child of node.children) {
      if (typeof child !== 'string') walk(child);
    }
  };
  walk(root);
  return found;
}

export function byClass(root: VNode, className: string): VNode[] {
  return findAll(root, (n) => (n.attrs.class ?? '').split(/\s+/).includes(className));
}

export function textOf(node: VNode | string): string {
  if (typeof node === 'string') return node;
  return node.children.map(textOf).join('');
}

const SVG_TAGS = new Set([
  'svg', 'g', 'circle', 'line', 'path', 'rect', 'text', 'title', 'defs', 'marker', 'polygon',
]);

/** Mount a VNode tree under a real DOM element (browser side only). */
export function mount(root: VNode, container: { innerHTML: string; appendChild(n: unknown): void }, doc: Document = document): void {
  const build = (node: VNode | string): Node => {
    if (typeof node === 'string') return doc.createTextNode(node);
    const el = SVG_TAGS.has(node.tag)
      ? doc.createElementNS('http://www.w3.org/2000/svg', node.tag)
      : doc.createElement(node.tag);
    for (const [key, value] of Object.entries(node.attrs)) {
      el.setAttribute(key, value);
    }
    for (const child of node.children) el.appendChild(build(child));
    return el;
  };
  container.innerHTML = '';
  container.appendChild(build(root));
}
