#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus and its recorded provider cache.

Writes fixtures/sources/fixture_papers.json, fixtures/scripted_rules.json,
and fixtures/atlas.config.json, then runs the real CLI pipeline in record
mode against the scripted provider to populate fixtures/cache.  Re-run this
whenever prompts, the corpus, or the scripted rules change; the recorded
cache is what makes replay runs deterministic.
"""

from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

sys.path.insert(0, str(ROOT / "src"))

from click.testing import CliRunner  # noqa: E402

from atlas.cli import main as atlas_cli  # noqa: E402


def subject(stype: str, subtype: str = "", feature: str = "") -> dict:
    return {"type": stype, "subtype": subtype, "feature": feature}


def triplet(cause: dict, relationship: str, effect: dict, outcome: str) -> dict:
    return {
        "cause": cause,
        "relationship": relationship,
        "effect": effect,
        "net_outcome": outcome,
    }


# One row per paper: findings carry (text, triplet); note papers carry a
# (type label, description) pair instead.
FINDINGS_PAPERS = [
    {
        "nid": "p01",
        "doi": "10.9999/atlas.p01",
        "title": "Chatbot explanations and student trust in intelligent tutoring",
        "venue": "Fixture Conference on Human-AI Interaction",
        "year": 2024,
        "authors": ["R. Vega", "T. Okafor"],
        "abstract": (
            "Intelligent tutoring systems increasingly justify their hints with natural-language "
            "explanations. In a classroom deployment with 140 medical students we varied the "
            "explanation quality of an AI chatbot tutor and measured trust before and after each "
            "session. Students who received faithful explanations reported substantially higher "
            "trust in the tutor's recommendations."
        ),
        "keywords": "Education, Intelligent Tutoring",
        "findings": [
            (
                "AI chatbot explanations increase medical students' trust in tutoring systems.",
                triplet(
                    subject("ai", "chatbot", "explanation"),
                    "INCREASES",
                    subject("human", "student", "trust"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p02",
        "doi": None,
        "title": "Voice assistants at the bedside: clinician trust under uncertainty",
        "venue": "Fixture Journal of Medical Informatics",
        "year": 2023,
        "authors": ["M. Ilves"],
        "abstract": (
            "Hospital wards are noisy, interrupt-driven environments in which voice interfaces "
            "promise hands-free access to patient records. We shadowed 22 clinicians using an AI "
            "voice assistant that verbalized its confidence before answering. Disclosing "
            "uncertainty raised clinicians' trust in the assistant, and its triage suggestions "
            "cut the time spent on routine documentation."
        ),
        "keywords": "Healthcare, Clinical Workflows",
        "findings": [
            (
                "AI voice assistants increase clinicians' trust when uncertainty is disclosed.",
                triplet(
                    subject("ai", "assistant", "voice"),
                    "INCREASES",
                    subject("human", "clinician", "trust"),
                    "positive",
                ),
            ),
            (
                "AI triage suggestions decrease clinicians' documentation workload.",
                triplet(
                    subject("ai", "recommender", "triage"),
                    "DECREASES",
                    subject("co", "workload"),
                    "positive",
                ),
            ),
        ],
    },
    {
        "nid": "p03",
        "doi": "10.9999/atlas.p03",
        "title": "Seeing why: transparency in everyday recommender systems",
        "venue": "Fixture Conference on Recommender Systems",
        "year": 2024,
        "authors": ["A. Duarte", "K. Lindqvist"],
        "abstract": (
            "Recommendation feeds rarely explain themselves to the people who scroll them. In a "
            "two-week field study, 310 participants used a media recommender that could reveal "
            "the provenance of each suggestion. Turning transparency on raised users' trust in "
            "the system and their satisfaction with the recommendations they accepted."
        ),
        "keywords": "Recommender Systems",
        "findings": [
            (
                "AI recommender transparency increases users' trust in suggestions.",
                triplet(
                    subject("ai", "recommender", "transparency"),
                    "INCREASES",
                    subject("human", "user", "trust"),
                    "positive",
                ),
            ),
            (
                "AI recommender transparency increases users' satisfaction with suggestions.",
                triplet(
                    subject("ai", "recommender", "transparency"),
                    "INCREASES",
                    subject("human", "user", "satisfaction"),
                    "positive",
                ),
            ),
        ],
    },
    {
        "nid": "p04",
        "doi": "10.9999/atlas.p04",
        "title": "Earned autonomy: developer trust in AI code assistants",
        "venue": "Fixture Symposium on Software Engineering",
        "year": 2025,
        "authors": ["J. Maro", "S. Petrov", "L. Anand"],
        "abstract": (
            "Code assistants now draft entire functions, yet teams differ widely in how much "
            "they let the tool do. Logging twelve weeks of assistant usage across four teams, we "
            "found that developers' trust grew after streaks of accepted completions, and that "
            "assistant-authored changes reshaped how reviewers collaborated during code review."
        ),
        "keywords": "Software Engineering, Code Review",
        "findings": [
            (
                "AI code assistants increase developers' trust after repeated successful completions.",
                triplet(
                    subject("ai", "assistant", "code"),
                    "INCREASES",
                    subject("human", "developer", "trust"),
                    "positive",
                ),
            ),
            (
                "AI code assistants influence team collaboration during code review.",
                triplet(
                    subject("ai", "assistant", "code"),
                    "INFLUENCES",
                    subject("co", "collaboration"),
                    "undetermined",
                ),
            ),
        ],
    },
    {
        "nid": "p05",
        "doi": "10.9999/atlas.p05",
        "title": "Companions that adapt: trust in cooperative game AI",
        "venue": "Fixture Conference on Games",
        "year": 2023,
        "authors": ["N. Brandt"],
        "abstract": (
            "Cooperative games pair players with AI companions for hours at a time. Across 60 "
            "sessions of a cooperative puzzle game we manipulated whether the companion adapted "
            "its pace to the player. Players teamed with the adaptive companion reported higher "
            "trust in it during joint play."
        ),
        "keywords": "Games, Cooperative Play",
        "findings": [
            (
                "Adaptive AI game companions increase players' trust during cooperative play.",
                triplet(
                    subject("ai", "agent", "adaptivity"),
                    "INCREASES",
                    subject("human", "player", "trust"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p06",
        "doi": "10.9999/atlas.p06",
        "title": "Undergraduate perceptions of explainable tutoring advice",
        "venue": "Fixture Conference on Learning at Scale",
        "year": 2025,
        "authors": ["C. Weiss", "H. Nakata"],
        "abstract": (
            "Replicating explanation effects outside medical curricula matters for tutoring "
            "systems aimed at broad audiences. With 210 undergraduates in an introductory "
            "statistics course, an AI chatbot tutor that explained its hints increased students' "
            "trust in the advice it gave."
        ),
        "keywords": "Education, Tutoring",
        "findings": [
            (
                "AI chatbot explanations increase undergraduate students' trust in tutoring advice.",
                triplet(
                    subject("ai", "chatbot", "explanation"),
                    "INCREASES",
                    subject("human", "student", "trust"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p07",
        "doi": "10.9999/atlas.p07",
        "title": "Delight and deadline: generative sketching in design practice",
        "venue": "Fixture Conference on Creativity and Cognition",
        "year": 2024,
        "authors": ["P. Szabo", "E. Martins"],
        "abstract": (
            "Generative sketch suggestions are marketed as a designer's second pair of hands. "
            "Diary studies with 18 professional designers showed a split experience: during "
            "open-ended ideation the suggestions energized exploration, while under deadline "
            "pressure the same suggestions felt intrusive and degraded the working experience."
        ),
        "keywords": "Design, Ideation",
        "findings": [
            (
                "Generative AI sketch suggestions influence designers' experience positively during early ideation.",
                triplet(
                    subject("ai", "generative", "sketch"),
                    "INFLUENCES",
                    subject("human", "designer", "experience"),
                    "positive",
                ),
            ),
            (
                "Generative AI sketch suggestions influence designers' experience negatively under deadline pressure.",
                triplet(
                    subject("ai", "generative", "sketch"),
                    "INFLUENCES",
                    subject("human", "designer", "experience"),
                    "negative",
                ),
            ),
        ],
    },
    {
        "nid": "p08",
        "doi": "10.9999/atlas.p08",
        "title": "Investigating the unintended: metaphor workshops for AI product teams",
        "venue": "Fixture Conference on Designing Interactive Systems",
        "year": 2025,
        "authors": ["G. Femi", "O. Castellanos"],
        "abstract": (
            "Anticipating harm is difficult while a product is still a sketch. We ran six "
            "workshops in which design teams examined their AI concepts through a crime-scene "
            "investigation metaphor, reconstructing how a deployed feature could have gone "
            "wrong. Teams using the metaphor identified markedly more unintended consequences "
            "than control teams."
        ),
        "keywords": "Design Workshops, Speculative Scenarios",
        "findings": [
            (
                "Crime-scene metaphor workshops increase designers' identification of unintended consequences.",
                triplet(
                    subject("co", "workshop", "metaphor(crime)"),
                    "INCREASES",
                    subject("human", "designer", "identification(consequences)"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p09",
        "doi": "10.9999/atlas.p09",
        "title": "Drawing together: bidirectional communication in co-creative sketching",
        "venue": "Fixture Conference on Intelligent User Interfaces",
        "year": 2022,
        "authors": ["Y. Romero"],
        "abstract": (
            "Co-creative sketching systems usually push suggestions one way, from model to "
            "canvas. We compared one-way and bidirectional variants of a sketching partner with "
            "24 designers. When designers could annotate and redirect the system's "
            "contributions, the overall design task experience improved significantly."
        ),
        "keywords": "Co-Creativity, Sketching",
        "findings": [
            (
                "Co-creative AI sketching with bidirectional communication increases designers' experience.",
                triplet(
                    subject("ai", "co_creative", "sketch(bidirectional)"),
                    "INCREASES",
                    subject("human", "designer", "experience"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p10",
        "doi": "10.9999/atlas.p10",
        "title": "Board-exam outcomes of GPT-4 tutoring in medical school",
        "venue": "Fixture Journal of Medical Education",
        "year": 2024,
        "authors": ["D. Okoye", "F. Hart"],
        "abstract": (
            "Personalized tutoring is scarce in medical curricula. Over one semester, 96 medical "
            "students prepared for board exams either with a GPT-4 based tutor or with static "
            "question banks. The tutored cohort scored significantly higher on the exam, with "
            "the largest gains among students who started weakest."
        ),
        "keywords": "Medical Education, Tutoring",
        "findings": [
            (
                "GPT-4 tutoring increases medical students' exam performance.",
                triplet(
                    subject("ai", "gpt4"),
                    "INCREASES",
                    subject("human", "student(medical)", "performance(exam)"),
                    "positive",
                ),
            ),
            (
                "GPT-4 tutoring increases medical students' trust in AI tutors.",
                triplet(
                    subject("ai", "gpt4"),
                    "INCREASES",
                    subject("human", "student", "trust"),
                    "positive",
                ),
            ),
        ],
    },
    {
        "nid": "p11",
        "doi": "10.9999/atlas.p11",
        "title": "Talking through the day: GPT-4o conversations with older adults",
        "venue": "Fixture Conference on Accessible Computing",
        "year": 2025,
        "authors": ["B. Anders", "W. Xiong"],
        "abstract": (
            "Voice-first conversational agents may lower barriers for older adults who find "
            "screens fatiguing. In a three-week home deployment, 31 older adults planned their "
            "days with a GPT-4o voice agent. Participants engaged with daily planning far more "
            "often than in the preceding baseline weeks."
        ),
        "keywords": "Older Adults, Voice Interfaces",
        "findings": [
            (
                "GPT-4o voice conversations increase older adults' engagement with daily planning.",
                triplet(
                    subject("ai", "gpt_4o"),
                    "INCREASES",
                    subject("human", "older_adult", "engagement"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p12",
        "doi": "10.9999/atlas.p12",
        "title": "Drafting with a model: GPT-4 suggestions in long-form writing",
        "venue": "Fixture Conference on Computer-Supported Cooperative Work",
        "year": 2023,
        "authors": ["I. Kaur"],
        "abstract": (
            "Long-form writing stalls when authors lose momentum between scenes. Twelve novelists "
            "drafted alternating chapters with and without GPT-4 continuation suggestions. "
            "Chapters drafted with suggestions were completed faster, and authors reported "
            "higher drafting productivity without feeling the prose was less their own."
        ),
        "keywords": "Writing, Productivity",
        "findings": [
            (
                "GPT-4 writing suggestions increase authors' drafting productivity.",
                triplet(
                    subject("ai", "gpt_4"),
                    "INCREASES",
                    subject("human", "author", "productivity"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p13",
        "doi": "10.9999/atlas.p13",
        "title": "Glass-box models in the reading room",
        "venue": "Fixture Journal of Clinical AI",
        "year": 2022,
        "authors": ["V. Moreau", "T. Salim"],
        "abstract": (
            "Radiology decision support is often a black box bolted onto the worklist. We "
            "compared opaque and interpretable variants of the same lesion classifier with 40 "
            "clinicians reading chest studies. With the interpretable variant, clinicians' "
            "diagnostic accuracy rose, driven by their ability to dismiss spurious model cues."
        ),
        "keywords": "Clinical Decision Support",
        "findings": [
            (
                "Interpretable AI models increase clinicians' diagnostic accuracy.",
                triplet(
                    subject("ai", "interpretable"),
                    "INCREASES",
                    subject("human", "clinician", "accuracy(diagnostic)"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p14",
        "doi": "10.9999/atlas.p14",
        "title": "Knowing when to ignore the machine",
        "venue": "Fixture Conference on Human Factors",
        "year": 2024,
        "authors": ["Z. Halvorsen", "Q. Deng"],
        "abstract": (
            "Advice-taking studies repeatedly show people following automated suggestions off a "
            "cliff. In two preregistered experiments (N=420), exposing the rationale of an "
            "advice-giving model reduced participants' overreliance on incorrect automated "
            "advice while leaving appropriate reliance intact."
        ),
        "keywords": "Reliance, Advice Taking",
        "findings": [
            (
                "AI interpretability decreases participants' overreliance on automated advice.",
                triplet(
                    subject("ai", "interpretability"),
                    "DECREASES",
                    subject("co", "overreliance"),
                    "positive",
                ),
            ),
            (
                "AI interpretability increases users' trust in automated advice.",
                triplet(
                    subject("ai", "interpretability"),
                    "INCREASES",
                    subject("human", "user", "trust"),
                    "positive",
                ),
            ),
        ],
    },
    {
        "nid": "p15",
        "doi": "10.9999/atlas.p15",
        "title": "Saliency for the rest of us: lay understanding of model behavior",
        "venue": "Fixture Conference on Visualization",
        "year": 2023,
        "authors": ["K. Obi", "R. Fontaine"],
        "abstract": (
            "Interpretability tooling is designed by experts for experts. We gave 150 "
            "crowdworkers either raw predictions or predictions with saliency-based "
            "interpretability features while they audited an image classifier. The "
            "interpretability condition substantially improved non-experts' understanding of "
            "when and why the model fails."
        ),
        "keywords": "Explainability, Lay Users",
        "findings": [
            (
                "AI interpretability features increase non-experts' understanding of model behavior.",
                triplet(
                    subject("ai", "", "interpretability"),
                    "INCREASES",
                    subject("human", "non_expert", "understanding"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p16",
        "doi": "10.9999/atlas.p16",
        "title": "Screening letters people can act on",
        "venue": "Fixture Journal of Public Health Informatics",
        "year": 2025,
        "authors": ["S. Brennan"],
        "abstract": (
            "Automated screening programs mail results to people with no clinical training. We "
            "redesigned result letters to include the screening model's explanation and tested "
            "them with 500 recipients. Explanations raised non-professionals' confidence in the "
            "screening result and halved follow-up phone calls."
        ),
        "keywords": "Screening, Confidence",
        "findings": [
            (
                "Automated screening explanations increase non-professionals' confidence in results.",
                triplet(
                    subject("ai", "explanation"),
                    "INCREASES",
                    subject("human", "non_professional", "confidence"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p17",
        "doi": "10.9999/atlas.p17",
        "title": "Worked examples as calibration aids for lay judgment",
        "venue": "Fixture Conference on Decision Support",
        "year": 2024,
        "authors": ["L. Ostrow", "M. Abara"],
        "abstract": (
            "Can explanations teach rather than persuade? We paired an assessment model with "
            "worked-example explanations that walked non-experts through analogous solved "
            "cases. After three sessions, participants' confidence in their own judgments rose "
            "and tracked their actual accuracy more closely."
        ),
        "keywords": "Worked Examples, Confidence",
        "findings": [
            (
                "AI worked-example explanations increase non-experts' confidence in their own judgments.",
                triplet(
                    subject("ai", "explanation", "example"),
                    "INCREASES",
                    subject("human", "non_expert", "confidence"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p18",
        "doi": "10.9999/atlas.p18",
        "title": "Echo chambers of one: self-conditioning in chained language models",
        "venue": "Fixture Workshop on Agent Pipelines",
        "year": 2025,
        "authors": ["E. Vartak"],
        "abstract": (
            "Multi-stage language-model pipelines feed one model's output into the next prompt. "
            "Tracing 2,000 pipeline executions, we measured how stylistic and factual choices "
            "made early in a chain conditioned the behavior of later stages, with drift "
            "compounding across hops regardless of temperature."
        ),
        "keywords": "Multi-Agent Pipelines",
        "findings": [
            (
                "LLM outputs influence subsequent LLM behavior in chained pipelines.",
                triplet(
                    subject("ai", "llm"),
                    "INFLUENCES",
                    subject("ai", "llm"),
                    "neutral",
                ),
            ),
            (
                "LLM pair-programming suggestions influence developers' trust in code assistants.",
                triplet(
                    subject("ai", "llm"),
                    "INFLUENCES",
                    subject("human", "developer", "trust"),
                    "undetermined",
                ),
            ),
        ],
    },
    {
        "nid": "p19",
        "doi": "10.9999/atlas.p19",
        "title": "A wave of the hand: gesture and acceptance of care robots",
        "venue": "Fixture Conference on Human-Robot Interaction",
        "year": 2022,
        "authors": ["U. Sanna", "J. Whitfield"],
        "abstract": (
            "Care robots succeed or fail on whether patients welcome them into intimate "
            "routines. In a rehabilitation clinic, a lifting-assist robot greeted and signposted "
            "its actions with co-speech gestures for half the patients. Gesturing significantly "
            "raised patients' acceptance of the robot's assistance."
        ),
        "keywords": "Care Robots, Acceptance",
        "findings": [
            (
                "Robot gestures increase patients' acceptance of care robots.",
                triplet(
                    subject("ai", "robot", "gesture"),
                    "INCREASES",
                    subject("human", "patient", "#acceptance"),
                    "positive",
                ),
            )
        ],
    },
    {
        "nid": "p20",
        "doi": "10.9999/atlas.p20",
        "title": "Scoring the session: AI music co-designed with therapists",
        "venue": "Fixture Conference on Health and Wellbeing Technologies",
        "year": 2024,
        "authors": ["H. Aliyev", "P. Mbeki"],
        "abstract": (
            "Music therapy adapts moment to moment, which static playlists cannot do. We "
            "co-designed an AI music generation tool with eight music therapists and trialed it "
            "across 64 sessions. Therapists personalized session soundtracks more deeply, and "
            "patients stayed engaged in therapy activity longer when the co-designed playlists "
            "were used."
        ),
        "keywords": "Music Therapy, Co-Design",
        "findings": [
            (
                "AI music generation tools increase therapists' session personalization.",
                triplet(
                    subject("ai", "generative", "music"),
                    "INCREASES",
                    subject("human", "therapist", "personalization"),
                    "positive",
                ),
            ),
            (
                "Co-designed AI music playlists increase patients' engagement in therapy sessions.",
                triplet(
                    subject("co", "codesign", "music"),
                    "INCREASES",
                    subject("human", "patient", "engagement(therapy)"),
                    "positive",
                ),
            ),
        ],
    },
]

NOTE_PAPERS = [
    {
        "nid": "p21",
        "doi": "10.9999/atlas.p21",
        "title": "A staged model of reliance calibration in conversational systems",
        "venue": "Fixture Journal of Theoretical HCI",
        "year": 2023,
        "authors": ["F. Deleu"],
        "abstract": (
            "This article develops a staged theoretical model of how people calibrate reliance "
            "on conversational systems, organizing prior constructs into initiation, probing, "
            "and settlement phases. We derive propositions for each phase and discuss boundary "
            "conditions, but report no new empirical data."
        ),
        "note": (
            "Conceptual framework",
            "Develops a staged theoretical model of reliance calibration without new empirical results.",
        ),
    },
    {
        "nid": "p22",
        "doi": "10.9999/atlas.p22",
        "title": "Twenty years of trust instruments in automation research: a systematic review",
        "venue": "Fixture Review Quarterly",
        "year": 2024,
        "authors": ["N. Sturm", "R. Casals"],
        "abstract": (
            "We systematically review 180 studies measuring trust in automated and intelligent "
            "systems, cataloguing the instruments used, their validation status, and domain "
            "coverage. The review maps instrument lineages and identifies measurement gaps for "
            "future empirical work."
        ),
        "note": (
            "Systematic review",
            "Reviews and catalogues trust measurement instruments across 180 automation studies.",
        ),
    },
    {
        "nid": "p23",
        "doi": "10.9999/atlas.p23",
        "title": "Workshop on provenance-aware interfaces for generative tools",
        "venue": "Fixture Extended Abstracts",
        "year": 2025,
        "authors": ["Organizing Committee"],
        "abstract": (
            "This workshop convenes researchers and practitioners interested in provenance-aware "
            "interfaces for generative tools. We invite position papers on attribution, "
            "watermarking UX, and audit trails; the day will mix lightning talks with working "
            "groups that draft a shared research agenda."
        ),
        "note": (
            "Workshop announcement",
            "Announces a workshop on provenance-aware interfaces for generative tools.",
        ),
    },
    {
        "nid": "p24",
        "doi": "10.9999/atlas.p24",
        "title": "Deck of tensions: a card method for scoping AI concepts",
        "venue": "Fixture Conference on Design Methods",
        "year": 2022,
        "authors": ["G. Paredes"],
        "abstract": (
            "We present a card-based method that helps product teams scope AI concepts by "
            "confronting them with forty recurring tensions drawn from the literature. The "
            "paper describes the deck's construction, facilitation formats, and variations for "
            "remote use, and closes with reflections from three pilot facilitations."
        ),
        "note": (
            "Design methodology",
            "Introduces a card-based facilitation method for scoping AI product concepts.",
        ),
    },
    {
        "nid": "p25",
        "doi": "10.9999/atlas.p25",
        "title": "An interchange schema for annotated dialogue corpora",
        "venue": "Fixture Language Resources",
        "year": 2023,
        "authors": ["T. Regev", "A. Osei"],
        "abstract": (
            "This paper specifies an interchange schema for annotated human-agent dialogue "
            "corpora, covering turn segmentation, span-level annotations, and tool provenance "
            "metadata. We provide a JSON serialization, validators, and converters from three "
            "widely used annotation toolkits."
        ),
        "note": (
            "Technical specification",
            "Specifies an interchange schema and validators for annotated dialogue corpora.",
        ),
    },
]

EXTRA_RAW_RECORDS = [
    {
        # Dropped by the filter: no abstract available.
        "native_id": "p26",
        "doi": "10.9999/atlas.p26",
        "title": "Proceedings front matter and welcome note",
        "venue": "Fixture Conference on Human-AI Interaction",
        "year": 2024,
        "authors": ["Program Chairs"],
        "type": "Research Article",
        "abstract": "",
        "url": "https://fixture.example/p26",
    },
    {
        # Dropped by the filter: publication type outside the whitelist.
        "native_id": "p27",
        "doi": "10.9999/atlas.p27",
        "title": "Editorial: on the state of evaluation practice",
        "venue": "Fixture Journal of Medical Informatics",
        "year": 2024,
        "authors": ["The Editors"],
        "type": "Editorial",
        "abstract": (
            "In this editorial we reflect on the year's submissions and argue for stronger "
            "evaluation practice across the field."
        ),
        "url": "https://fixture.example/p27",
    },
    {
        # Dropped by dedupe: same DOI as p01.
        "native_id": "p28",
        "doi": "10.9999/atlas.p01",
        "title": "Chatbot explanations and student trust in intelligent tutoring (reprint)",
        "venue": "Fixture Reprint Series",
        "year": 2025,
        "authors": ["R. Vega", "T. Okafor"],
        "type": "Research Article",
        "abstract": "Reprint of the classroom deployment study on explanation quality and trust.",
        "url": "https://fixture.example/p28",
    },
    {
        # Dropped by dedupe: same normalized title as p02, both DOI-less.
        "native_id": "p29",
        "doi": None,
        "title": "Voice Assistants at the Bedside: Clinician Trust Under Uncertainty!",
        "venue": "Fixture Preprint Server",
        "year": 2023,
        "authors": ["M. Ilves"],
        "type": "Research Article",
        "abstract": "Preprint of the ward shadowing study of voice assistants and clinician trust.",
        "url": "https://fixture.example/p29",
    },
]

EMBEDDING_RULES = {
    "dim": 64,
    "family_weight": 1.0,
    "group_weight": 0.85,
    "jitter": 0.02,
    "groups": [
        ["ai:gpt4", "ai:gpt_4", "ai:gpt_4o"],
        ["ai:interpretable", "ai:interpretability", "ai>interpretability"],
        ["human:non_expert>confidence", "human:non_professional>confidence"],
    ],
    "families": {
        "human-trust": [
            "human:student>trust",
            "human:clinician>trust",
            "human:user>trust",
            "human:developer>trust",
            "human:player>trust",
        ],
        "human-design": [
            "human:designer>experience",
            "human:designer>identification(consequences)",
        ],
        "human-learning": [
            "human:student(medical)>performance(exam)",
            "human:older_adult>engagement",
            "human:author>productivity",
        ],
        "human-care": [
            "human:clinician>accuracy(diagnostic)",
            "human:patient>#acceptance",
            "human:therapist>personalization",
            "human:patient>engagement(therapy)",
        ],
        "human-lay": [
            "human:non_expert>understanding",
            "human:non_expert>confidence",
            "human:non_professional>confidence",
            "human:user>satisfaction",
        ],
        "ai-conversational": [
            "ai:chatbot>explanation",
            "ai:assistant>voice",
            "ai:assistant>code",
            "ai:gpt4",
            "ai:gpt_4",
            "ai:gpt_4o",
        ],
        "ai-explain": [
            "ai:interpretable",
            "ai:interpretability",
            "ai>interpretability",
            "ai:explanation",
            "ai:explanation>example",
            "ai:recommender>transparency",
        ],
        "ai-generative": [
            "ai:generative>sketch",
            "ai:co_creative>sketch(bidirectional)",
            "ai:generative>music",
            "ai:llm",
        ],
        "ai-embodied": [
            "ai:robot>gesture",
            "ai:agent>adaptivity",
            "ai:recommender>triage",
        ],
        "co-practice": [
            "co:collaboration",
            "co:codesign>music",
            "co:workshop>metaphor(crime)",
        ],
        "co-risk": ["co:overreliance", "co:workload"],
    },
}


def build_raw_records() -> list[dict]:
    records = []
    for paper in FINDINGS_PAPERS + NOTE_PAPERS:
        records.append(
            {
                "native_id": paper["nid"],
                "doi": paper["doi"],
                "title": paper["title"],
                "venue": paper["venue"],
                "year": paper["year"],
                "authors": paper["authors"],
                "type": "Research Article",
                "abstract": paper["abstract"],
                "url": f"https://fixture.example/{paper['nid']}",
            }
        )
    records.extend(EXTRA_RAW_RECORDS)
    return records


def build_scripted_rules() -> dict:
    responses = []
    for paper in FINDINGS_PAPERS:
        lines = [f"- {text}" for text, _ in paper["findings"]]
        lines.append(f"Keywords: {paper['keywords']}")
        responses.append(
            {
                "template": "findings-v1",
                "match": paper["abstract"][:90],
                "response": "\n".join(lines),
            }
        )
        for text, spec in paper["findings"]:
            responses.append(
                {
                    "template": "triplet-v1",
                    "match": text,
                    "response": json.dumps(spec, ensure_ascii=False),
                }
            )
    for paper in NOTE_PAPERS:
        note_type, description = paper["note"]
        responses.append(
            {
                "template": "findings-v1",
                "match": paper["abstract"][:90],
                "response": f"Note:\ntype: {note_type}\ndescription: {description}",
            }
        )
    return {"responses": responses, "embedding": EMBEDDING_RULES}


def build_config() -> dict:
    return {
        "provider": {
            "mode": "replay",
            "extraction_model": "claude-opus-4-1-20250805",
            "embedding_model": "qwen3-embedding-8b",
            "naming_model": "claude-opus-4-1-20250805",
            "embedding_dim": 64,
            "cache_dir": "fixtures/cache",
        },
        "merge": {"eps": 0.2, "min_pts": 2},
        "cluster": {"k_min": 2, "k_max": 15, "seed": 7, "restarts": 10},
        "graph": {"threshold": 5},
        "analysis": {"seed": 7, "top_k": 20},
        "service": {"admin_token": "fixture-admin"},
    }


def run_cli(runner: CliRunner, args: list[str]) -> None:
    result = runner.invoke(atlas_cli, args, catch_exceptions=False)
    if result.exit_code != 0:
        raise SystemExit(f"CLI failed: atlas {' '.join(args)}\n{result.output}")
    print(f"$ atlas {' '.join(args)}\n{result.output}", end="")


def main() -> None:
    (FIXTURES / "sources").mkdir(parents=True, exist_ok=True)
    papers_path = FIXTURES / "sources" / "fixture_papers.json"
    papers_path.write_text(
        json.dumps(build_raw_records(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    rules_path = FIXTURES / "scripted_rules.json"
    rules_path.write_text(
        json.dumps(build_scripted_rules(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    (FIXTURES / "atlas.config.json").write_text(
        json.dumps(build_config(), indent=2) + "\n", encoding="utf-8"
    )

    cache_dir = FIXTURES / "cache"
    if cache_dir.exists():
        shutil.rmtree(cache_dir)
    cache_dir.mkdir()

    record_config = build_config()
    record_config["provider"]["mode"] = "record"
    record_config["provider"]["scripted_rules"] = str(rules_path)

    runner = CliRunner()
    with tempfile.TemporaryDirectory() as work:
        work_path = Path(work)
        config_path = work_path / "record.config.json"
        config_path.write_text(json.dumps(record_config), encoding="utf-8")
        base = ["--config", str(config_path)]
        run_cli(
            runner,
            base
            + [
                "ingest",
                "--source",
                "fixture",
                "--in",
                str(papers_path),
                "--out",
                str(work_path / "raw.jsonl"),
            ],
        )
        run_cli(
            runner,
            base
            + [
                "filter",
                "--in",
                str(work_path / "raw.jsonl"),
                "--out",
                str(work_path / "corpus.jsonl"),
                "--report",
                str(work_path / "report.json"),
            ],
        )
        run_cli(
            runner,
            base
            + [
                "extract",
                "--corpus",
                str(work_path / "corpus.jsonl"),
                "--cache",
                str(cache_dir),
                "--mode",
                "record",
                "--out",
                f"{work_path / 'findings.jsonl'},{work_path / 'triplets.jsonl'}",
            ],
        )
        run_cli(
            runner,
            base
            + [
                "merge",
                "--triplets",
                str(work_path / "triplets.jsonl"),
                "--cache",
                str(cache_dir),
                "--mode",
                "record",
                "--vectors",
                str(work_path / "vectors.f32"),
                "--merge-map",
                str(work_path / "merge_map.json"),
                "--out",
                str(work_path / "merged_triplets.jsonl"),
            ],
        )
        run_cli(
            runner,
            base
            + [
                "cluster",
                "--triplets",
                str(work_path / "merged_triplets.jsonl"),
                "--vectors",
                str(work_path / "vectors.f32"),
                "--cache",
                str(cache_dir),
                "--mode",
                "record",
                "--out",
                str(work_path / "clusters.json"),
            ],
        )
        run_cli(
            runner,
            base
            + [
                "build-graph",
                "--triplets",
                str(work_path / "merged_triplets.jsonl"),
                "--clusters",
                str(work_path / "clusters.json"),
                "--out",
                str(work_path / "atlas.json"),
            ],
        )
        run_cli(
            runner,
            base
            + [
                "analyze",
                "--in",
                str(work_path / "atlas.json"),
                "--out",
                str(work_path / "analysis.json"),
            ],
        )
        merge_map = json.loads((work_path / "merge_map.json").read_text())
        print(f"merge clusters: {[c['canonical'] for c in merge_map['clusters']]}")

    recorded = sum(1 for p in cache_dir.iterdir() if p.is_file())
    print(f"recorded {recorded} provider responses into {cache_dir}")


if __name__ == "__main__":
    main()
