"""Default prompt templates for the extraction, embedding, and naming stages.

Template ids are versioned and participate in the request digest, so editing
a template invalidates recorded responses for that stage.  The templates
instruct the model to answer in the machine-readable shapes the parsers in
:mod:`atlas.extraction` and :mod:`atlas.semantics` expect.
"""

from __future__ import annotations

FINDINGS_TEMPLATE_ID = "findings-v1"

FINDINGS_PROMPT = """\
You will be given the abstract of a research paper about people interacting
with AI systems. Extract the empirical findings it reports.

Rules:
- Report only substantiated results in which an AI system is directly
  involved; skip methodology, hypotheses, framework descriptions, and
  future work.
- Write each finding as one self-contained sentence in subject-predicate-
  object form, understandable without the abstract.
- Keep only the most important findings: at most 3 bullets, fewer is fine.
- Generalize product-specific system names to the AI capability they
  represent.

Answer format when findings exist, one per line:
- <finding sentence>
Keywords: <1-3 comma-separated topical tags; never generic terms such as
"human-AI interaction", "HCI", or "artificial intelligence">

Answer format when the abstract reports no empirical findings:
Note:
type: <one of: Conceptual framework / Systematic review / Workshop
announcement / System and methodology improvement / Design methodology /
Technical specification / Research proposal / Other>
description: <one sentence summarizing the paper>

Abstract:
{abstract}
"""

TRIPLET_TEMPLATE_ID = "triplet-v1"

TRIPLET_PROMPT = """\
Convert the research finding below into exactly one structured cause/effect
relationship, answering with a single JSON object and nothing else:

{{"cause": {{"type": ..., "subtype": ..., "feature": ...}},
  "relationship": ...,
  "effect": {{"type": ..., "subtype": ..., "feature": ...}},
  "net_outcome": ...}}

Subject coding rules:
- type is one of "human" (individual actors), "ai" (AI systems or
  components), or "co" (concepts and objects that fit neither).
- subtype is a broad, reusable category (e.g. "student", "llm",
  "collaboration"); use "" when no subtype applies. Refine with
  parentheses when needed, e.g. "student(medical)".
- feature is the specific attribute being affected; prefix with "#" when it
  is a perception or belief rather than an objective attribute (e.g.
  "#trust"); refine with parentheses, e.g. "creativity(writing)"; use ""
  when there is no feature.
- All fields lowercase; join multi-word names with underscores.

relationship is "INCREASES" or "DECREASES" for direct measurable impact,
"INFLUENCES" for complex or indirect effects.

net_outcome is "positive" for beneficial human impact, "negative" for
detrimental, "neutral" for balanced or negligible, "undetermined" for
unclear or mixed results.

Finding:
{finding}
"""

EMBEDDING_TEMPLATE_ID = "key-embedding-v1"

NAMING_TEMPLATE_ID = "cluster-naming-v1"

NAMING_PROMPT = """\
The entity keys below are the most representative members of one thematic
cluster of {entity_type}-type research entities, ordered by closeness to the
cluster centroid. Propose a short descriptive name and a one-sentence
description for the cluster. Answer with a single JSON object:
{{"name": ..., "description": ...}}

Representative keys:
{representatives}
"""


def render_findings_prompt(abstract: str) -> str:
    return FINDINGS_PROMPT.format(abstract=abstract)


def render_triplet_prompt(finding: str) -> str:
    return TRIPLET_PROMPT.format(finding=finding)


def render_naming_prompt(entity_type: str, representatives: list[str]) -> str:
    listing = "\n".join(f"- {key}" for key in representatives)
    return NAMING_PROMPT.format(entity_type=entity_type, representatives=listing)
