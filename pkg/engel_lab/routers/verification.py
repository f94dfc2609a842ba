import logging
from typing import Callable, Dict, List

import numpy as np
from joblib import Parallel, delayed

from engel_lab.config import settings
from engel_lab.exceptions import InvalidElement, ResourceCapExceeded
from engel_lab.group import check_class_bound_suite, check_group_suite, check_witness, unipotent_group
from engel_lab.lie_algebra import LParams, check_lie_suite
from engel_lab.multidegree import check_sandwich_suite
from engel_lab.reporting import CaseTally, merge_reports
from engel_lab.schemas import RunConfig, Suite, VerificationReport
from engel_lab.star_algebra import check_star_suite

logger = logging.getLogger(__name__)

ENGEL_CHUNK = 50
EXHAUSTIVE_ENGEL_GROUND = 2
# Word length for the exhaustive sweep; the letter count grows like 3n.
EXHAUSTIVE_ENGEL_MAX_M = 4

SuiteHandler = Callable[[RunConfig], VerificationReport]


class SuiteRouter:
    """Maps suite names onto handlers registered with @router.suite(...)."""

    def __init__(self):
        self.routes: Dict[Suite, SuiteHandler] = {}

    def suite(self, name: Suite):
        def decorator(handler: SuiteHandler) -> SuiteHandler:
            self.routes[name] = handler
            return handler
        return decorator

    def dispatch(self, config: RunConfig) -> VerificationReport:
        handler = self.routes.get(config.suite)
        if handler is None:
            raise InvalidElement(f"no handler for suite {config.suite.value!r}")
        enforce_caps(config)
        logger.info("running suite %s (m=%d, ground=%d, seed=%d)", config.suite.value, config.m,
                    config.ground_size, config.seed)
        report = handler(config).model_copy(update={"config": config_echo(config), "seed": config.seed})
        logger.info("suite %s: %d/%d passed, %d vacuous", config.suite.value, report.cases_passed,
                    report.cases_total, report.cases_vacuous)
        return report


router = SuiteRouter()

# Suites that realize matrices over the star truncation of the chosen ground set.
_DENSE_SUITES = {Suite.STAR, Suite.GROUP, Suite.ENGEL, Suite.CLASS_BOUND, Suite.ALL}


def star_dim(m: int, ground_size: int) -> int:
    return (2 ** ground_size - 1) * (LParams(m).n + 1) + 1


def matrix_cap(config: RunConfig) -> int:
    """Dense dimension cap handed to the algebras; --force lifts it to the requested truncation."""
    if config.force:
        return max(settings.MAX_MATRIX_DIM, star_dim(config.m, config.ground_size))
    return settings.MAX_MATRIX_DIM


def enforce_caps(config: RunConfig) -> None:
    if config.force:
        return
    if config.m > settings.MAX_M:
        raise ResourceCapExceeded(f"m = {config.m} exceeds the cap {settings.MAX_M}; pass --force to override")
    if config.r > settings.MAX_R:
        raise ResourceCapExceeded(f"r = {config.r} exceeds the cap {settings.MAX_R}; pass --force to override")
    if config.ground_size > settings.MAX_GROUND:
        raise ResourceCapExceeded(f"ground size {config.ground_size} exceeds the cap {settings.MAX_GROUND}")
    if config.suite in _DENSE_SUITES:
        dim = star_dim(config.m, config.ground_size)
        if dim > settings.MAX_MATRIX_DIM:
            raise ResourceCapExceeded(
                f"star truncation dimension {dim} exceeds the matrix cap {settings.MAX_MATRIX_DIM}; "
                "pass --force to override"
            )


def case_seeds(seed: int, count: int) -> List[int]:
    """Independent per-chunk seeds; chunk k always receives the same seed."""
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


def _engel_chunk(m: int, ground_size: int, max_dim: int, start: int, count: int, seed: int) -> VerificationReport:
    return unipotent_group(m, ground_size, max_dim).engel_sweep(count, seed, start=start)


@router.suite(Suite.LIE)
def run_lie(config: RunConfig) -> VerificationReport:
    return check_lie_suite(config.m, config.samples, config.seed)


@router.suite(Suite.STAR)
def run_star(config: RunConfig) -> VerificationReport:
    return check_star_suite(config.m, config.ground_size, config.samples, config.seed, max_dim=matrix_cap(config))


@router.suite(Suite.GROUP)
def run_group(config: RunConfig) -> VerificationReport:
    return check_group_suite(config.m, config.ground_size, config.samples, config.seed, max_dim=matrix_cap(config))


@router.suite(Suite.ENGEL)
def run_engel(config: RunConfig) -> VerificationReport:
    tally = CaseTally("engel", seed=config.seed, config=config_echo(config))
    max_dim = matrix_cap(config)
    max_length = 3 if config.m <= EXHAUSTIVE_ENGEL_MAX_M else 2
    tally.absorb(unipotent_group(config.m, EXHAUSTIVE_ENGEL_GROUND, max_dim).engel_exhaustive(max_length))
    tally.measure("exhaustive_max_length", max_length)
    starts = list(range(0, config.samples, ENGEL_CHUNK))
    seeds = case_seeds(config.seed, len(starts))
    reports = Parallel(n_jobs=config.jobs)(
        delayed(_engel_chunk)(config.m, config.ground_size, max_dim, start,
                              min(ENGEL_CHUNK, config.samples - start), seed)
        for start, seed in zip(starts, seeds)
    )
    for report in reports:
        tally.absorb(report)
    tally.measure("random_words", config.samples)
    return tally.report()


@router.suite(Suite.WITNESS)
def run_witness(config: RunConfig) -> VerificationReport:
    return check_witness(config.m)


@router.suite(Suite.CLASS_BOUND)
def run_class_bound(config: RunConfig) -> VerificationReport:
    return check_class_bound_suite(config.m, config.ground_size, config.r, config.samples, config.seed,
                                   max_dim=matrix_cap(config))


@router.suite(Suite.SANDWICH)
def run_sandwich(config: RunConfig) -> VerificationReport:
    return check_sandwich_suite(config.m, config.r, config.samples, config.seed)


ALL_ORDER = [Suite.LIE, Suite.STAR, Suite.GROUP, Suite.ENGEL, Suite.WITNESS, Suite.CLASS_BOUND, Suite.SANDWICH]


@router.suite(Suite.ALL)
def run_all(config: RunConfig) -> VerificationReport:
    reports = [router.routes[name](config.model_copy(update={"suite": name})) for name in ALL_ORDER]
    return merge_reports("all", reports, seed=config.seed, config=config_echo(config), prefixed=True)


def config_echo(config: RunConfig) -> dict:
    return config.model_dump(mode="json", exclude={"output_path", "force", "jobs"})
