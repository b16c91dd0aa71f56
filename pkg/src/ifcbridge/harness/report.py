"""Trial and suite reports, and JSON renderings of run outcomes."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from .. import cg, fg
from ..state import SecurityAbort, Store, Stuck, Timeout

PASS = "pass"
VACUOUS_TIMEOUT = "vacuous-timeout"
VACUOUS_ABORT = "vacuous-abort-pair"
FAIL = "FAIL"
INCONCLUSIVE = "inconclusive-fuel"
VERDICTS = (PASS, VACUOUS_TIMEOUT, VACUOUS_ABORT, FAIL, INCONCLUSIVE)


def show_store(calculus: str, store: Store) -> dict[str, list[str]]:
    """Every cell printed with the label of its memory."""
    if calculus == "fg":
        return {lab.name: [fg.show_value(fg.Value(r, lab)) for r in mem] for lab, mem in store}
    return {lab.name: [cg.show_value(cg.LabeledV(lab, v)) for v in mem] for lab, mem in store}


def show_heap(calculus: str, heap) -> list[str]:
    show = fg.show_value if calculus == "fg" else cg.show_value
    return [show(v) for v in heap]


def outcome_json(calculus: str, o) -> dict[str, Any]:
    """Wire form of a run outcome (final configuration, abort, timeout or stuck)."""
    out: dict[str, Any] = {"outcome": o.kind if hasattr(o, "kind") else "final",
                           "fuel_used": o.fuel_used}
    match o:
        case fg.FGFinal(store, heap, value):
            out.update(outcome="final", value=fg.show_value(value), value_sugar=fg.show_value(value, True),
                       pc=None, store=show_store("fg", store), heap=show_heap("fg", heap))
        case cg.CGFinal(store, heap, pc, value):
            out.update(outcome="final", value=cg.show_value(value), value_sugar=cg.show_value(value, True),
                       pc=pc.name, store=show_store("cg", store), heap=show_heap("cg", heap))
        case SecurityAbort(rule, check):
            out.update(rule=rule, check=check)
        case Stuck(reason):
            out.update(reason=reason)
        case Timeout():
            pass
    return out


def input_names(n: int) -> list[str]:
    """Scope naming environment slot ``i`` as ``v<i>`` (innermost last)."""
    return [f"v{i}" for i in reversed(range(n))]


def show_program(calculus: str, e) -> str:
    from ..cli.syntax import free_vars, print_expr

    free = free_vars(calculus, e, with_drops=True)
    return print_expr(calculus, e, input_names(max(free) + 1 if free else 0))


@dataclass
class TrialReport:
    trial: str  # replay key: "<seed>/<index>" or "corpus/<name>"
    verdict: str
    program: str = ""
    detail: str = ""
    inputs: dict[str, Any] = field(default_factory=dict)
    outcomes: list[dict[str, Any]] = field(default_factory=list)
    minimized: str | None = None

    def to_json(self) -> dict[str, Any]:
        return {
            "trial": self.trial,
            "verdict": self.verdict,
            "program": self.program,
            "detail": self.detail,
            "inputs": self.inputs,
            "outcomes": self.outcomes,
            "minimized": self.minimized,
        }


@dataclass
class SuiteReport:
    suite: str
    config: dict[str, Any]
    counts: Counter = field(default_factory=Counter)
    failures: list[TrialReport] = field(default_factory=list)
    stats: dict[str, float] = field(default_factory=dict)
    max_detailed: int = 5
    duration: float = 0.0

    def add(self, report: TrialReport) -> None:
        self.counts[report.verdict] += 1
        if report.verdict == FAIL:
            self.failures.append(report)

    def merge(self, other: SuiteReport) -> SuiteReport:
        out = SuiteReport(self.suite, self.config, self.counts + other.counts,
                          self.failures + other.failures, dict(self.stats))
        for k, v in other.stats.items():
            out.stats[k] = out.stats.get(k, 0) + v
        return out

    @property
    def trials(self) -> int:
        return sum(self.counts.values())

    @property
    def failed(self) -> int:
        return self.counts[FAIL]

    @property
    def ok(self) -> bool:
        return self.failed == 0

    @property
    def vacuous_fraction(self) -> float:
        vac = self.counts[VACUOUS_TIMEOUT] + self.counts[VACUOUS_ABORT] + self.counts[INCONCLUSIVE]
        return vac / self.trials if self.trials else 0.0

    def to_json(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "config": self.config,
            "trials": self.trials,
            "counts": {v: self.counts[v] for v in VERDICTS},
            "vacuous_fraction": round(self.vacuous_fraction, 4),
            "passed": self.ok,
            "failure_seeds": [f.trial for f in self.failures],
            "failures": [f.to_json() for f in self.failures[: self.max_detailed]],
            "stats": {k: round(v, 4) if isinstance(v, float) else v for k, v in sorted(self.stats.items())},
            "duration": round(self.duration, 3),
        }

    def summary(self) -> str:
        parts = ", ".join(f"{v}={self.counts[v]}" for v in VERDICTS if self.counts[v])
        return f"{self.suite}: {self.trials} trials ({parts}); vacuous {self.vacuous_fraction:.1%}"
