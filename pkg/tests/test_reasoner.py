import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from muser.controller import RetrievalTrace
from muser.evidence import EvidenceSnippet
from muser.reasoner import ReasonerBackend, classify, verdict_to_dict
from muser.summarize import Claim

CLAIM = Claim(text="some claim", source_id="c")
TRACE = RetrievalTrace(steps=[], stop_reason="budget_exhausted")


def _snippet(score):
    return EvidenceSnippet(text=f"s{score}", source=("d", 0, 0), score=score)


def test_backend_validation():
    with pytest.raises(ValueError):
        ReasonerBackend(kind="magic")
    with pytest.raises(ValueError):
        ReasonerBackend(kind="remote", endpoint=None)


def test_baseline_empty_evidence():
    verdict = classify(CLAIM, [], ReasonerBackend(), TRACE)
    assert verdict.prob_true == pytest.approx(1 / (1 + math.exp(5)), abs=1e-12)
    assert verdict.label == 0
    assert verdict.trace is TRACE


def test_baseline_perfect_match():
    verdict = classify(CLAIM, [_snippet(1.0)], ReasonerBackend(), TRACE)
    assert verdict.prob_true == pytest.approx(1 / (1 + math.exp(-5)), abs=1e-12)
    assert verdict.label == 1


def test_baseline_midpoint_ties_to_true():
    verdict = classify(CLAIM, [_snippet(0.5)], ReasonerBackend(), TRACE)
    assert verdict.prob_true == pytest.approx(0.5, abs=1e-12)
    assert verdict.label == 1


def test_baseline_uses_max_score():
    verdict = classify(CLAIM, [_snippet(0.2), _snippet(0.9), _snippet(0.4)], ReasonerBackend(), TRACE)
    expected = 1 / (1 + math.exp(-10 * (0.9 - 0.5)))
    assert verdict.prob_true == pytest.approx(expected, abs=1e-12)


def test_baseline_configurable_curve():
    backend = ReasonerBackend(slope=2.0, midpoint=0.75)
    verdict = classify(CLAIM, [_snippet(0.75)], backend, TRACE)
    assert verdict.prob_true == pytest.approx(0.5, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=-1, max_value=1), max_size=8), st.floats(min_value=-1, max_value=1))
def test_baseline_monotone_in_added_evidence(scores, extra):
    base = classify(CLAIM, [_snippet(s) for s in scores], ReasonerBackend(), TRACE)
    more = classify(CLAIM, [_snippet(s) for s in scores] + [_snippet(extra)], ReasonerBackend(), TRACE)
    assert more.prob_true >= base.prob_true
    assert 0.0 <= base.prob_true <= 1.0
    assert base.label == (1 if base.prob_true >= 0.5 else 0)


def test_remote_classifier(http_stub):
    seen = {}

    def route(body):
        seen.update(body)
        return 200, {"prob_true": 0.25}

    base = http_stub({"/classify": route})
    backend = ReasonerBackend(kind="remote", endpoint=f"{base}/classify")
    evidence = [_snippet(0.2), _snippet(0.8)]
    verdict = classify(CLAIM, evidence, backend, TRACE)
    assert verdict.prob_true == 0.25
    assert verdict.label == 0
    assert seen["claim"] == "some claim"
    # evidence arrives score-descending
    assert seen["evidence"] == ["s0.8", "s0.2"]


def test_remote_failure_falls_back_to_baseline(http_stub):
    base = http_stub({"/classify": lambda body: (503, {})})
    backend = ReasonerBackend(kind="remote", endpoint=f"{base}/classify")
    flags = []
    verdict = classify(CLAIM, [_snippet(1.0)], backend, TRACE, flags=flags)
    assert verdict.prob_true == pytest.approx(1 / (1 + math.exp(-5)), abs=1e-12)
    assert any("reasoner_fallback" in f for f in flags)


def test_remote_out_of_range_prob_rejected(http_stub):
    base = http_stub({"/classify": lambda body: (200, {"prob_true": 1.5})})
    backend = ReasonerBackend(kind="remote", endpoint=f"{base}/classify")
    flags = []
    verdict = classify(CLAIM, [], backend, TRACE, flags=flags)
    assert verdict.prob_true == pytest.approx(1 / (1 + math.exp(5)), abs=1e-12)
    assert flags


def test_verdict_to_dict():
    verdict = classify(CLAIM, [_snippet(1.0)], ReasonerBackend(), TRACE)
    doc = verdict_to_dict(verdict)
    assert doc == {"label": 1, "prob_true": verdict.prob_true}
