"""Answer pipeline: grounding, citations, refusals, generation providers,
language detection and localization."""

import pytest

from devicedesk.errors import EmptyQuery, ProviderTimeout
from devicedesk.rag.language import IdentityTranslation, LanguageDetector
from devicedesk.rag.pipeline import (
    ExtractiveProvider,
    QueryRequest,
    RagPipeline,
    RetrievedContext,
    RefusalTemplates,
    generate,
    localize,
)


class TestAnswerQuery:
    def test_chunk_self_retrieval_is_first_citation(self, desk_deployment, desk_pipeline):
        chunk = desk_deployment.chunks["um-transducer-care#0000"]
        answer = desk_pipeline.answer_query(QueryRequest(text=chunk.text))
        assert answer.grounded
        assert answer.citations[0] == chunk.chunk_id

    def test_gibberish_refuses_with_template(self, desk_pipeline):
        answer = desk_pipeline.answer_query(QueryRequest(text="zqxv kjw"))
        assert not answer.grounded
        assert answer.citations == []
        assert answer.text == RefusalTemplates.shipped().get("grounding", "en")

    def test_empty_query(self, desk_pipeline):
        with pytest.raises(EmptyQuery):
            desk_pipeline.answer_query(QueryRequest(text="   "))

    def test_citations_subset_of_retrieved(self, desk_pipeline):
        answer = desk_pipeline.answer_query(QueryRequest(text="how do I clean the transducer"))
        assert answer.grounded
        assert answer.citations
        assert set(answer.citations) <= set(answer.retrieved)

    def test_deterministic_apart_from_latency(self, desk_pipeline):
        req = QueryRequest(text="how do I export studies to usb")
        a = desk_pipeline.answer_query(req)
        b = desk_pipeline.answer_query(QueryRequest(text="how do I export studies to usb"))
        pa, pb = a.to_payload(), b.to_payload()
        pa.pop("latency_ms"), pb.pop("latency_ms")
        assert pa == pb

    def test_exact_error_code_answer(self, desk_pipeline, desk_deployment):
        answer = desk_pipeline.answer_query(QueryRequest(text="what does E-001 mean?"))
        assert answer.intent == "error_code_lookup"
        assert answer.confidence == 1.0
        assert answer.grounded
        entry = desk_deployment.catalogs["USX-300"].get("E-001")
        assert answer.tool_payload["entry"]["description"] == entry.description
        assert answer.citations == [entry.source_chunk_id]

    def test_transcription_slip_gets_disambiguation(self, desk_pipeline):
        answer = desk_pipeline.answer_query(QueryRequest(text="what does E-O01 mean?"))
        assert answer.intent == "error_code_lookup"
        assert "disambiguation" in answer.flags
        codes = [e["code"] for e in answer.tool_payload["suggestions"]]
        assert "E-001" in codes

    def test_unknown_code_refusal_names_code(self, desk_pipeline):
        answer = desk_pipeline.answer_query(QueryRequest(text="what does Z-9994 mean?"))
        assert answer.intent == "error_code_lookup"
        assert "not_found" in answer.flags
        if not answer.grounded:
            assert "Z-9994" in answer.text

    def test_self_test_intent_carries_tool_payload(self, desk_pipeline):
        answer = desk_pipeline.answer_query(
            QueryRequest(text="run the self test", device_model="USX-300")
        )
        assert answer.intent == "self_test"
        assert answer.tool_payload["available"] is True
        assert answer.tool_payload["start_endpoint"] == "/v1/selftest/USX-300/start"

    def test_maintenance_intent_payload(self, desk_pipeline):
        answer = desk_pipeline.answer_query(
            QueryRequest(text="show the maintenance calendar for this unit")
        )
        assert answer.intent == "maintenance_schedule"
        assert answer.tool_payload["available"] is True

    def test_k_override_bounds_citations(self, desk_pipeline):
        answer = desk_pipeline.answer_query(QueryRequest(text="how do I adjust image gain", k=2))
        assert len(answer.citations) <= 2

    def test_requested_segment_override(self, desk_pipeline):
        answer = desk_pipeline.answer_query(
            QueryRequest(
                text="how do I clean the transducer", requested_segments=["service_manual"]
            )
        )
        assert all(c.startswith("sm-") for c in answer.citations)


class TestGeneration:
    def test_extractive_contains_chunk_text_and_id(self, desk_deployment, desk_pipeline):
        hits = desk_deployment.segments["user_manual"].search(
            desk_deployment.embedder.embed("cleaning the transducer"), k=1
        )
        context = RetrievedContext.from_hits(hits, desk_deployment.chunks)
        out = generate(context, "q", ExtractiveProvider())
        assert f"[{hits[0].chunk_id}]" in out
        assert context.hits[0].text[:60] in out

    def test_extractive_deterministic(self, desk_deployment):
        hits = desk_deployment.segments["user_manual"].search(
            desk_deployment.embedder.embed("probe storage"), k=3
        )
        context = RetrievedContext.from_hits(hits, desk_deployment.chunks)
        assert generate(context, "q", ExtractiveProvider()) == generate(
            context, "q", ExtractiveProvider()
        )

    def test_assembled_context_contains_each_id_once(self, desk_deployment):
        hits = desk_deployment.segments["service_manual"].search(
            desk_deployment.embedder.embed("fuse replacement"), k=4
        )
        context = RetrievedContext.from_hits(hits, desk_deployment.chunks)
        for h in hits:
            assert context.assembled_context.count(f"[{h.chunk_id}]") == 1

    def test_remote_fabricated_citation_stripped(self, desk_config, desk_deployment):
        class FakeRemote:
            name = "remote_llm"

            def generate(self, context, query, language):
                real = context.hits[0].chunk_id
                return f"Wipe the probe [{real}] and sacrifice a goat [made-up#9999]."

        pipeline = RagPipeline(
            desk_deployment, provider=FakeRemote(), tau_ground=desk_config.tau_ground
        )
        answer = pipeline.answer_query(QueryRequest(text="how do I clean the transducer"))
        assert "made-up#9999" not in answer.text
        assert "stripped_citations" in answer.flags
        assert answer.grounded
        assert all(c in answer.retrieved for c in answer.citations)

    def test_remote_all_citations_bogus_becomes_refusal(self, desk_config, desk_deployment):
        class Fabulist:
            name = "remote_llm"

            def generate(self, context, query, language):
                return "Trust me [nope#0001]."

        pipeline = RagPipeline(
            desk_deployment, provider=Fabulist(), tau_ground=desk_config.tau_ground
        )
        answer = pipeline.answer_query(QueryRequest(text="how do I clean the transducer"))
        assert not answer.grounded
        assert answer.citations == []
        assert "ungrounded_generation" in answer.flags

    def test_provider_timeout_falls_back_to_extractive(self, desk_config, desk_deployment):
        class Stalls:
            name = "remote_llm"

            def generate(self, context, query, language):
                raise ProviderTimeout("simulated")

        pipeline = RagPipeline(
            desk_deployment, provider=Stalls(), tau_ground=desk_config.tau_ground
        )
        answer = pipeline.answer_query(QueryRequest(text="how do I clean the transducer"))
        assert answer.grounded
        assert "degraded" in answer.flags
        assert answer.citations  # extractive output with real citations


class TestLanguage:
    def test_french_detection(self, desk_deployment):
        guess = desk_deployment.detector.detect("comment nettoyer la sonde")
        assert guess.tag == "fr"
        assert not guess.flagged

    def test_empty_text_default_flagged(self, desk_deployment):
        guess = desk_deployment.detector.detect("")
        assert guess.tag == "en"
        assert guess.flagged

    def test_identity_localize_flags_untranslated(self, desk_pipeline):
        answer = desk_pipeline.answer_query(
            QueryRequest(text="how do I clean the transducer", language="fr")
        )
        original = answer.text
        assert "untranslated" in answer.flags
        assert answer.language == "en"
        assert answer.text == original

    def test_french_query_gets_french_refusal(self, desk_pipeline):
        answer = desk_pipeline.answer_query(QueryRequest(text="quelle est la météo aujourd'hui"))
        if not answer.grounded:
            assert answer.text == RefusalTemplates.shipped().get("grounding", "fr")
            assert answer.language == "fr"

    def test_localize_with_real_provider(self):
        from devicedesk.rag.pipeline import RagAnswer

        class Upper:
            def translate(self, text, source, target):
                return text.upper()

        answer = RagAnswer(
            text="wipe the probe", citations=[], grounded=False, confidence=0.0,
            latency_ms=0.0, language="en",
        )
        out = localize(answer, "fr", Upper())
        assert out.text == "WIPE THE PROBE"
        assert out.language == "fr"
