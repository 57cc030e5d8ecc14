"""Binary classification metrics with both positive-class views.

Per-class precision/recall/F1 are reported twice, once with true news as
the positive class (the -T columns) and once with fake news as positive
(-F). Macro-F1 averages the two class F1s; micro-F1 over pooled decisions
equals accuracy for single-label binary classification. Any metric with a
zero denominator is defined as 0.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ClassScores:
    f1: float
    precision: float
    recall: float


@dataclass(frozen=True)
class MetricsReport:
    f1_macro: float
    f1_micro: float
    true_pos_class: ClassScores
    fake_pos_class: ClassScores
    tp_t: int
    fn_t: int
    fp_t: int
    tn_t: int

    def format_row(self) -> str:
        """F1-Ma/F1-Mi/F1-T/P-T/R-T/F1-F/P-F/R-F at three decimals."""
        t, f = self.true_pos_class, self.fake_pos_class
        values = [self.f1_macro, self.f1_micro, t.f1, t.precision, t.recall,
                  f.f1, f.precision, f.recall]
        return "/".join(f"{v:.3f}" for v in values)

    def to_dict(self) -> dict:
        t, f = self.true_pos_class, self.fake_pos_class
        return {
            "f1_macro": self.f1_macro,
            "f1_micro": self.f1_micro,
            "f1_t": t.f1, "p_t": t.precision, "r_t": t.recall,
            "f1_f": f.f1, "p_f": f.precision, "r_f": f.recall,
            "confusion": {"tp_t": self.tp_t, "fn_t": self.fn_t,
                          "fp_t": self.fp_t, "tn_t": self.tn_t},
        }


def _prf(tp: int, fp: int, fn: int) -> ClassScores:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ClassScores(f1=f1, precision=precision, recall=recall)


def compute_metrics(pred: list[int], gold: list[int]) -> MetricsReport:
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predictions vs {len(gold)} labels")
    if not pred:
        raise ValueError("need at least one prediction")
    if not all(v in (0, 1) for v in pred) or not all(v in (0, 1) for v in gold):
        raise ValueError("labels must be 0 or 1")
    tp_t = sum(1 for p, g in zip(pred, gold) if p == 1 and g == 1)
    fn_t = sum(1 for p, g in zip(pred, gold) if p == 0 and g == 1)
    fp_t = sum(1 for p, g in zip(pred, gold) if p == 1 and g == 0)
    tn_t = sum(1 for p, g in zip(pred, gold) if p == 0 and g == 0)
    true_pos = _prf(tp_t, fp_t, fn_t)
    # Mirrored view: fake news as the positive class.
    fake_pos = _prf(tn_t, fn_t, fp_t)
    f1_macro = (true_pos.f1 + fake_pos.f1) / 2
    f1_micro = (tp_t + tn_t) / len(pred)
    return MetricsReport(
        f1_macro=f1_macro,
        f1_micro=f1_micro,
        true_pos_class=true_pos,
        fake_pos_class=fake_pos,
        tp_t=tp_t, fn_t=fn_t, fp_t=fp_t, tn_t=tn_t,
    )
