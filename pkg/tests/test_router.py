"""Intent classification and slot extraction."""

import numpy as np
import pytest

from devicedesk.embedding import EmbedderSpec, HashedNgramEmbedder
from devicedesk.errors import EmptyQuery, TooFewExemplars
from devicedesk.router import IntentRouter

SPEC = EmbedderSpec(dimension=4096, seed=1234)


@pytest.fixture(scope="module")
def router():
    r = IntentRouter(HashedNgramEmbedder(SPEC))
    r.register_exemplars(
        "instructional",
        ["how do I clean the transducer", "how to adjust the gain", "where is the power switch"],
    )
    r.register_exemplars(
        "maintenance_schedule",
        [
            "when is the next scheduled maintenance",
            "generate the preventive maintenance plan",
            "show the maintenance calendar",
        ],
    )
    return r


class TestSlotExtraction:
    def test_known_code_forces_lookup(self, router):
        d = router.classify("what does E-042 mean", catalog_codes={"E-042"})
        assert d.intent == "error_code_lookup"
        assert d.confidence == 1.0
        assert d.slots["code"] == "E-042"

    def test_code_with_spaces_normalized(self, router):
        d = router.classify("error e 042 on screen", catalog_codes={"E-042"})
        assert d.intent == "error_code_lookup"
        assert d.slots["code"] == "E-042"

    def test_pattern_code_not_in_catalog_still_routes(self, router):
        d = router.classify("the display shows F-77 again", catalog_codes={"E-042"})
        assert d.intent == "error_code_lookup"
        assert d.slots["code"] == "F-77"

    def test_device_model_token_is_not_a_code(self, router):
        d = router.classify(
            "when is maintenance due for the USX-300",
            catalog_codes={"E-042"},
            known_models={"USX-300"},
        )
        assert d.intent == "maintenance_schedule"

    def test_slot_precedence_over_surrounding_text(self, router):
        # even a clearly instructional sentence routes to lookup when a known
        # catalog code appears anywhere in it
        d = router.classify(
            "how do I clean the transducer after seeing E-042", catalog_codes={"E-042"}
        )
        assert d.intent == "error_code_lookup"
        assert d.slots["code"] == "E-042"

    def test_empty_query_rejected(self, router):
        with pytest.raises(EmptyQuery):
            router.classify("   ")


class TestExemplars:
    def test_too_few_exemplars(self, router):
        with pytest.raises(TooFewExemplars):
            IntentRouter(router.embedder).register_exemplars("self_test", ["a", "b"])

    def test_centroid_unit_norm(self, router):
        c = router.centroid("instructional")
        assert np.linalg.norm(c) == pytest.approx(1.0, abs=1e-9)

    def test_identical_phrases_centroid_equals_embedding(self):
        r = IntentRouter(HashedNgramEmbedder(SPEC))
        phrase = "run the self test"
        r.register_exemplars("self_test", [phrase, phrase, phrase])
        expected = r.embedder.embed(phrase).values.astype(np.float64)
        assert np.allclose(r.centroid("self_test"), expected, atol=1e-7)

    def test_exemplars_self_classify(self, router):
        for intent in ("instructional", "maintenance_schedule"):
            for phrase in router._exemplars[intent]:
                d = router.classify(phrase)
                assert d.intent == intent, (phrase, d)

    def test_unknown_below_threshold(self, router):
        d = router.classify("zzzz qqqq vvvv")
        assert d.intent == "unknown"
        assert d.confidence < router.tau_intent

    def test_deterministic(self, router):
        a = router.classify("how do I clean the probe head")
        b = router.classify("how do I clean the probe head")
        assert (a.intent, a.confidence, a.matched_exemplar_id) == (
            b.intent,
            b.confidence,
            b.matched_exemplar_id,
        )

    def test_argmax_invariant_to_positive_scaling(self, router):
        # scaling all similarities by a positive constant cannot change argmax
        qv = router.embedder.embed("when is the next service visit planned")
        from devicedesk.embedding import cosine_similarity

        scores = {
            i: cosine_similarity(qv.values, c.astype(np.float32))
            for i, c in router._centroids.items()
        }
        base = max(scores, key=lambda i: scores[i])
        scaled = max(scores, key=lambda i: 3.7 * scores[i])
        assert base == scaled

    def test_exemplar_file_round_trip(self, tmp_path, router):
        path = tmp_path / "exemplars.txt"
        path.write_text(
            "# v2\n"
            "instructional | how do I clean the transducer\n"
            "instructional | how to adjust the gain\n"
            "instructional | where is the power switch\n"
            "self_test | run the self test\n"
            "self_test | start the self test now\n"
            "self_test | begin the diagnostic self test\n"
        )
        r = IntentRouter(router.embedder)
        r.load_exemplar_file(path)
        assert sorted(r.registered_intents) == ["instructional", "self_test"]
        assert r.classify("begin the self test").intent == "self_test"
