import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from muser.metrics import ClassScores, MetricsReport, compute_metrics


def counting_oracle(pred, gold):
    """Independent confusion-matrix arithmetic."""
    tp = sum(p == 1 and g == 1 for p, g in zip(pred, gold))
    fn = sum(p == 0 and g == 1 for p, g in zip(pred, gold))
    fp = sum(p == 1 and g == 0 for p, g in zip(pred, gold))
    tn = sum(p == 0 and g == 0 for p, g in zip(pred, gold))

    def prf(tp_, fp_, fn_):
        p_ = tp_ / (tp_ + fp_) if tp_ + fp_ else 0.0
        r_ = tp_ / (tp_ + fn_) if tp_ + fn_ else 0.0
        f_ = 2 * p_ * r_ / (p_ + r_) if p_ + r_ else 0.0
        return p_, r_, f_

    p_t, r_t, f_t = prf(tp, fp, fn)
    p_f, r_f, f_f = prf(tn, fn, fp)
    return {
        "f1_macro": (f_t + f_f) / 2,
        "f1_micro": (tp + tn) / len(pred),
        "p_t": p_t, "r_t": r_t, "f1_t": f_t,
        "p_f": p_f, "r_f": r_f, "f1_f": f_f,
    }


def test_perfect_predictions():
    report = compute_metrics([1, 0, 1, 0], [1, 0, 1, 0])
    assert report.f1_macro == 1.0
    assert report.f1_micro == 1.0
    assert report.true_pos_class == ClassScores(1.0, 1.0, 1.0)
    assert report.fake_pos_class == ClassScores(1.0, 1.0, 1.0)


def test_worked_confusion_example():
    # TP_T=3, FN_T=1, FP_T=2, TN_T=4 hand-computed:
    # P-T=0.6, R-T=0.75, F1-T=2/3; P-F=0.8, R-F=2/3, F1-F=8/11
    # F1-Ma=23/33 (0.6970), F1-Mi=0.7
    pred = [1, 1, 1, 0] + [1, 1, 0, 0, 0, 0]
    gold = [1, 1, 1, 1] + [0, 0, 0, 0, 0, 0]
    report = compute_metrics(pred, gold)
    assert (report.tp_t, report.fn_t, report.fp_t, report.tn_t) == (3, 1, 2, 4)
    assert report.true_pos_class.precision == pytest.approx(0.6, abs=1e-12)
    assert report.true_pos_class.recall == pytest.approx(0.75, abs=1e-12)
    assert report.true_pos_class.f1 == pytest.approx(2 / 3, abs=1e-12)
    assert report.fake_pos_class.precision == pytest.approx(0.8, abs=1e-12)
    assert report.fake_pos_class.recall == pytest.approx(2 / 3, abs=1e-12)
    assert report.fake_pos_class.f1 == pytest.approx(8 / 11, abs=1e-12)
    assert report.f1_macro == pytest.approx(23 / 33, abs=1e-9)
    assert report.f1_micro == pytest.approx(0.7, abs=1e-9)


def test_format_row_column_order():
    report = MetricsReport(
        f1_macro=0.732, f1_micro=0.729,
        true_pos_class=ClassScores(f1=0.757, precision=0.735, recall=0.780),
        fake_pos_class=ClassScores(f1=0.702, precision=0.728, recall=0.681),
        tp_t=0, fn_t=0, fp_t=0, tn_t=0,
    )
    assert report.format_row() == "0.732/0.729/0.757/0.735/0.780/0.702/0.728/0.681"


def test_to_dict_keys():
    report = compute_metrics([1, 0], [1, 1])
    assert set(report.to_dict()) == {
        "f1_macro", "f1_micro", "f1_t", "p_t", "r_t", "f1_f", "p_f", "r_f", "confusion",
    }


def test_zero_denominator_convention():
    # nothing predicted true, nothing gold true: T-view all zeros
    report = compute_metrics([0, 0], [0, 0])
    assert report.true_pos_class == ClassScores(0.0, 0.0, 0.0)
    assert report.fake_pos_class == ClassScores(1.0, 1.0, 1.0)
    assert report.f1_micro == 1.0


def test_length_mismatch_fatal():
    with pytest.raises(ValueError, match="mismatch"):
        compute_metrics([1], [1, 0])
    with pytest.raises(ValueError, match="at least one"):
        compute_metrics([], [])
    with pytest.raises(ValueError, match="0 or 1"):
        compute_metrics([2], [1])


def test_matches_counting_oracle_bulk():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 40)
        pred = [rng.randint(0, 1) for _ in range(n)]
        gold = [rng.randint(0, 1) for _ in range(n)]
        report = compute_metrics(pred, gold)
        expected = counting_oracle(pred, gold)
        got = report.to_dict()
        for key, value in expected.items():
            assert got[key] == value, key


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=30))
def test_swapping_positive_class_mirrors_views(pairs):
    pred = [p for p, _ in pairs]
    gold = [g for _, g in pairs]
    report = compute_metrics(pred, gold)
    flipped = compute_metrics([1 - p for p in pred], [1 - g for g in gold])
    assert flipped.true_pos_class == report.fake_pos_class
    assert flipped.fake_pos_class == report.true_pos_class
    assert flipped.f1_macro == report.f1_macro
    assert flipped.f1_micro == report.f1_micro


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=30))
def test_micro_f1_equals_accuracy(pairs):
    pred = [p for p, _ in pairs]
    gold = [g for _, g in pairs]
    report = compute_metrics(pred, gold)
    accuracy = sum(p == g for p, g in pairs) / len(pairs)
    assert report.f1_micro == pytest.approx(accuracy, abs=1e-12)
