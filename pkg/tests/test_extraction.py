import json

import pytest

from atlas.corpus import PaperRecord
from atlas.extraction import (
    Finding,
    NoFindingsNote,
    ResponseParseError,
    extract_findings,
    extract_triplet,
    normalize_note_type,
    parse_findings_response,
    parse_triplet_response,
    run_extraction,
)
from atlas.notation import format_key
from atlas.providers import ReplayCache, ReplayProvider, ScriptedProvider


def paper(pid="p1", abstract="We measured things and found results."):
    return PaperRecord(
        id=pid,
        title="T",
        abstract=abstract,
        venue="V",
        source_db="fixture",
        pub_type="Research Article",
        year=2024,
        authors=(),
    )


def finding(text="AI explanations increase trust.", pid="p1", index=0):
    return Finding(paper_id=pid, index=index, text=text, keywords=("Trust",))


class TestFindingsParsing:
    def test_dash_bullets_and_keywords(self):
        response = (
            "- AI tutors increase engagement.\n"
            "- AI tutors reduce frustration.\n"
            "Keywords: Education, Tutoring\n"
        )
        findings = parse_findings_response("p1", response)
        assert [f.text for f in findings] == [
            "AI tutors increase engagement.",
            "AI tutors reduce frustration.",
        ]
        assert findings[0].keywords == ("Education", "Tutoring")
        assert findings[0].ref == "p1#0" and findings[1].ref == "p1#1"

    @pytest.mark.parametrize("marker", ["*", "1.", "2)"])
    def test_tolerant_bullet_markers(self, marker):
        findings = parse_findings_response("p1", f"{marker} One finding here.")
        assert [f.text for f in findings] == ["One finding here."]

    def test_cap_at_three_findings_in_order(self):
        response = "\n".join(f"- Finding number {i}." for i in range(5))
        findings = parse_findings_response("p1", response)
        assert [f.text for f in findings] == [f"Finding number {i}." for i in range(3)]

    def test_generic_keywords_dropped(self):
        response = "- A finding.\nKeywords: Human-AI Interaction, Healthcare, HCI, AI"
        (finding,) = parse_findings_response("p1", response)
        assert finding.keywords == ("Healthcare",)

    def test_note_parsed_with_closed_enum(self):
        response = "Note:\ntype: Conceptual framework\ndescription: Theory only."
        note = parse_findings_response("p1", response)
        assert isinstance(note, NoFindingsNote)
        assert note.note_type == "conceptual_framework"
        assert note.description == "Theory only."

    def test_unknown_note_type_maps_to_other(self):
        note = parse_findings_response("p1", "type: Position paper\ndescription: D.")
        assert note.note_type == "other"

    def test_unparseable_response_raises(self):
        with pytest.raises(ResponseParseError):
            parse_findings_response("p1", "The weather is nice today.")

    @pytest.mark.parametrize(
        "label, expected",
        [
            ("Workshop announcement", "workshop_announcement"),
            ("Systematic review", "systematic_review"),
            ("System and methodology improvement", "system_methodology_improvement"),
            ("Design methodology", "design_methodology"),
            ("Technical specification", "technical_specification"),
            ("Research proposal", "research_proposal"),
            ("Other", "other"),
        ],
    )
    def test_note_type_vocabulary(self, label, expected):
        assert normalize_note_type(label) == expected


def triplet_json(cause, relationship, effect, outcome="positive"):
    return json.dumps(
        {"cause": cause, "relationship": relationship, "effect": effect, "net_outcome": outcome}
    )


class TestTripletParsing:
    def test_structured_subjects(self):
        raw = triplet_json(
            {"type": "ai", "subtype": "chatbot", "feature": "explanation"},
            "INCREASES",
            {"type": "human", "subtype": "student", "feature": "trust"},
        )
        t = parse_triplet_response(finding(), raw)
        assert format_key(t.cause) == "ai:chatbot>explanation"
        assert format_key(t.effect) == "human:student>trust"
        assert t.relationship == "INCREASES" and t.net_outcome == "positive"

    def test_subject_with_specificity_and_perception(self):
        raw = triplet_json(
            {"type": "ai", "subtype": "teacher(2d)", "feature": ""},
            "INCREASES",
            {"type": "human", "subtype": "student", "feature": "#trust"},
        )
        t = parse_triplet_response(finding(), raw)
        assert format_key(t.cause) == "ai:teacher(2d)"
        assert format_key(t.effect) == "human:student>#trust"

    def test_json_embedded_in_prose(self):
        raw = "Here is the triplet you asked for:\n" + triplet_json(
            {"type": "ai", "subtype": "llm", "feature": ""},
            "INFLUENCES",
            {"type": "co", "subtype": "collaboration", "feature": ""},
            "neutral",
        ) + "\nHope that helps!"
        t = parse_triplet_response(finding(), raw)
        assert format_key(t.cause) == "ai:llm"

    def test_unknown_type_quarantined(self):
        raw = triplet_json(
            {"type": "robot", "subtype": "arm", "feature": ""},
            "INCREASES",
            {"type": "human", "subtype": "user", "feature": "trust"},
        )
        with pytest.raises(ResponseParseError, match="malformed key"):
            parse_triplet_response(finding(), raw)

    def test_unknown_relationship_rejected(self):
        raw = triplet_json(
            {"type": "ai", "subtype": "llm", "feature": ""},
            "IMPROVES",
            {"type": "human", "subtype": "user", "feature": "trust"},
        )
        with pytest.raises(ResponseParseError, match="IMPROVES"):
            parse_triplet_response(finding(), raw)

    def test_unknown_outcome_rejected(self):
        raw = triplet_json(
            {"type": "ai", "subtype": "llm", "feature": ""},
            "INCREASES",
            {"type": "human", "subtype": "user", "feature": "trust"},
            outcome="mixed",
        )
        with pytest.raises(ResponseParseError):
            parse_triplet_response(finding(), raw)

    def test_empty_subject_rejected(self):
        raw = triplet_json(
            {"type": "ai", "subtype": "", "feature": ""},
            "INCREASES",
            {"type": "human", "subtype": "user", "feature": "trust"},
        )
        with pytest.raises(ResponseParseError):
            parse_triplet_response(finding(), raw)

    def test_no_json_at_all(self):
        with pytest.raises(ResponseParseError, match="no JSON object"):
            parse_triplet_response(finding(), "not structured")


def scripted(rules_responses):
    return ScriptedProvider({"responses": rules_responses})


class TestStageOps:
    def test_empty_abstract_is_invalid_input(self, tmp_path):
        with pytest.raises(ValueError, match="empty abstract"):
            extract_findings(paper(abstract="  "), scripted([]), ReplayCache(tmp_path), "m")

    def test_extract_findings_stable_after_recording(self, tmp_path):
        cache = ReplayCache(tmp_path)
        provider = scripted(
            [{"template": "findings-v1", "match": "measured things", "response": "- A result."}]
        )
        first = extract_findings(paper(), provider, cache, "m")
        replayed = extract_findings(paper(), ReplayProvider(cache), cache, "m")
        assert first == replayed

    def test_extract_triplet_validates_against_notation(self, tmp_path):
        cache = ReplayCache(tmp_path)
        provider = scripted(
            [
                {
                    "template": "triplet-v1",
                    "match": "increase trust",
                    "response": triplet_json(
                        {"type": "ai", "subtype": "chatbot", "feature": ""},
                        "INCREASES",
                        {"type": "human", "subtype": "", "feature": "trust"},
                    ),
                }
            ]
        )
        t = extract_triplet(finding("Explanations increase trust."), provider, cache, "m")
        assert format_key(t.effect) == "human>trust"


def corpus_with_rules():
    papers = [
        paper("pa", "Abstract alpha reports two results."),
        paper("pb", "Abstract beta is purely conceptual."),
        paper("pc", "Abstract gamma yields a broken triplet."),
    ]
    rules = [
        {
            "template": "findings-v1",
            "match": "alpha reports",
            "response": "- Alpha finding one.\n- Alpha finding two.\nKeywords: Alpha",
        },
        {
            "template": "findings-v1",
            "match": "beta is purely conceptual",
            "response": "Note:\ntype: Conceptual framework\ndescription: Framework only.",
        },
        {
            "template": "findings-v1",
            "match": "gamma yields",
            "response": "- Gamma finding.",
        },
        {
            "template": "triplet-v1",
            "match": "Alpha finding one.",
            "response": triplet_json(
                {"type": "ai", "subtype": "llm", "feature": ""},
                "INCREASES",
                {"type": "human", "subtype": "user", "feature": "trust"},
            ),
        },
        {
            "template": "triplet-v1",
            "match": "Alpha finding two.",
            "response": triplet_json(
                {"type": "ai", "subtype": "llm", "feature": ""},
                "DECREASES",
                {"type": "co", "subtype": "workload", "feature": ""},
            ),
        },
        {
            "template": "triplet-v1",
            "match": "Gamma finding.",
            "response": triplet_json(
                {"type": "robot", "subtype": "arm", "feature": ""},
                "INCREASES",
                {"type": "human", "subtype": "user", "feature": "trust"},
            ),
        },
    ]
    return papers, rules


class TestRunExtraction:
    def test_paper_outcomes_are_exclusive_and_exhaustive(self, tmp_path):
        papers, rules = corpus_with_rules()
        run = run_extraction(papers, scripted(rules), ReplayCache(tmp_path), model="m")
        with_findings = {f.paper_id for f in run.findings}
        with_notes = {n.paper_id for n in run.notes}
        paper_quarantined = {q.paper_id for q in run.quarantine if q.scope == "paper"}
        finding_quarantined = {q.paper_id for q in run.quarantine if q.scope == "finding"}
        assert with_findings == {"pa", "pc"}
        assert with_notes == {"pb"}
        assert paper_quarantined == set()
        assert finding_quarantined == {"pc"}  # stage two failed, stage one stood
        for pid in ("pa", "pb", "pc"):
            buckets = [pid in with_findings, pid in with_notes, pid in paper_quarantined]
            assert sum(buckets) == 1

    def test_quarantine_retains_raw_response(self, tmp_path):
        papers, rules = corpus_with_rules()
        run = run_extraction(papers, scripted(rules), ReplayCache(tmp_path), model="m")
        (entry,) = [q for q in run.quarantine if q.scope == "finding"]
        assert entry.finding_ref == "pc#0"
        assert "robot" in entry.raw_response

    def test_replay_runs_bit_deterministic(self, tmp_path):
        papers, rules = corpus_with_rules()
        cache = ReplayCache(tmp_path)
        run_extraction(papers, scripted(rules), cache, model="m")  # record
        replay_a = run_extraction(papers, ReplayProvider(cache), cache, model="m")
        replay_b = run_extraction(papers, ReplayProvider(cache), cache, model="m")
        rows = lambda run: (
            [f.to_row() for f in run.findings],
            [t.to_row() for t in run.triplets],
            [n.to_row() for n in run.notes],
        )
        assert rows(replay_a) == rows(replay_b)

    def test_worker_count_does_not_change_results(self, tmp_path):
        papers, rules = corpus_with_rules()
        cache = ReplayCache(tmp_path)
        run_extraction(papers, scripted(rules), cache, model="m")
        serial = run_extraction(papers, ReplayProvider(cache), cache, model="m", workers=1)
        parallel = run_extraction(papers, ReplayProvider(cache), cache, model="m", workers=4)
        assert [f.to_row() for f in serial.findings] == [f.to_row() for f in parallel.findings]
        assert [t.to_row() for t in serial.triplets] == [t.to_row() for t in parallel.triplets]

    def test_provider_failure_quarantines_paper(self, tmp_path):
        papers = [paper("pa", "Abstract with no matching rule.")]
        run = run_extraction(papers, scripted([]), ReplayCache(tmp_path), model="m")
        assert [q.scope for q in run.quarantine] == ["paper"]
        assert not run.findings and not run.notes
