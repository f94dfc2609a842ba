"""Accumulates case outcomes into a VerificationReport.

Every check function in the library returns a report built here; failures are
recorded as data, with inputs rendered in the text formats of the algebra
modules so a failing case can be replayed by hand.
"""
import time
from typing import Any, Callable, Dict, Iterable, Optional, Union

from engel_lab.schemas import FailureRecord, VerificationReport

Lazy = Union[str, Callable[[], str]]


def _resolve(value: Optional[Lazy]) -> str:
    if value is None:
        return ""
    return value() if callable(value) else str(value)


class CaseTally:
    def __init__(self, suite: str, seed: Optional[int] = None, config: Optional[Dict[str, Any]] = None):
        self.suite = suite
        self.seed = seed
        self.config = dict(config or {})
        self.total = 0
        self.passed = 0
        self.vacuous = 0
        self.failures = []
        self.measured: Dict[str, Any] = {}
        self._start = time.perf_counter()

    def check(
        self,
        case_id: Lazy,
        ok: bool,
        inputs: Optional[Callable[[], Dict[str, str]]] = None,
        expected: Optional[Lazy] = None,
        actual: Optional[Lazy] = None,
    ) -> bool:
        """Record one case. Failure details are only rendered when the case fails."""
        self.total += 1
        if ok:
            self.passed += 1
            return True
        self.failures.append(
            FailureRecord(
                case_id=_resolve(case_id),
                inputs={k: str(v) for k, v in (inputs() if inputs else {}).items()},
                expected=_resolve(expected),
                actual=_resolve(actual),
            )
        )
        return False

    def add_passed(self, count: int) -> None:
        self.total += count
        self.passed += count

    def vacuous_pass(self, case_id: str) -> None:
        # An empty quantifier range: reported apart from real passes.
        self.total += 1
        self.vacuous += 1
        self.measured.setdefault("vacuous_cases", []).append(case_id)

    def measure(self, key: str, value: Any) -> None:
        self.measured[key] = value

    def absorb(self, report: VerificationReport, prefix: Optional[str] = None) -> None:
        """Fold another report's cases and measurements into this tally."""
        self.total += report.cases_total
        self.passed += report.cases_passed
        self.vacuous += report.cases_vacuous
        for failure in report.failures:
            case_id = f"{prefix}.{failure.case_id}" if prefix else failure.case_id
            self.failures.append(failure.model_copy(update={"case_id": case_id}))
        check = report.config.get("check")
        if check:
            self._count_check(f"{prefix}.{check}" if prefix else check, report.cases_passed,
                              len(report.failures), report.cases_vacuous)
        for key, value in report.measured_values.items():
            name = f"{prefix}.{key}" if prefix else key
            if key == "checks" and not prefix:
                for sub, counts in value.items():
                    self._count_check(sub, counts["passed"], counts["failed"], counts["vacuous"])
            elif key == "vacuous_cases" and not prefix:
                self.measured.setdefault("vacuous_cases", []).extend(value)
            else:
                self.measured[name] = value

    def _count_check(self, name: str, passed: int, failed: int, vacuous: int) -> None:
        # Same check absorbed twice (one per r, say) accumulates.
        counts = self.measured.setdefault("checks", {}).setdefault(name, {"passed": 0, "failed": 0, "vacuous": 0})
        counts["passed"] += passed
        counts["failed"] += failed
        counts["vacuous"] += vacuous

    def report(self) -> VerificationReport:
        return VerificationReport(
            suite=self.suite,
            cases_total=self.total,
            cases_passed=self.passed,
            cases_vacuous=self.vacuous,
            failures=list(self.failures),
            measured_values=dict(self.measured),
            timing_ms=int((time.perf_counter() - self._start) * 1000),
            seed=self.seed,
            config=self.config,
        )


def merge_reports(suite: str, reports: Iterable[VerificationReport], seed: Optional[int] = None,
                  config: Optional[Dict[str, Any]] = None, prefixed: bool = False) -> VerificationReport:
    tally = CaseTally(suite, seed=seed, config=config)
    for report in reports:
        tally.absorb(report, prefix=report.suite if prefixed else None)
    return tally.report()
