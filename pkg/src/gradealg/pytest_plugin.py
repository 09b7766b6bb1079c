"""
pytest plugin: step-logging switches and the shared fixture corpus.

Registered through the ``pytest11`` entry point; ``pytest_plugins = ["gradealg.pytest_plugin"]`` in a
conftest works too and does not register it twice.
"""

from __future__ import annotations

from typing import Any, List

import pytest

from .algebra import GradedAlgebra
from .config import LOG_STEPS_ENV, is_truthy_env
from .constructions import (
    cyclic_polynomial_quotient,
    direct_sum,
    k_plus_ck,
    odd_nilpotent,
    poly_quotient,
    trivial_algebra,
    truncated_polynomial,
    twisted_z2z2,
    wall_fixture,
)
from .grassmann import EnvelopeSpec, envelope, materialize
from .steps import set_step_logging


def build_corpus() -> List[GradedAlgebra]:
    """Every algebra the property suites run over."""
    return [*build_z2_corpus(), twisted_z2z2(), cyclic_polynomial_quotient(3, 4)]


def build_z2_corpus() -> List[GradedAlgebra]:
    return [
        *build_variety_corpus(),
        materialize(1),
        materialize(2),
        materialize(3),
        materialize(4),
        wall_fixture("A1", n=2),
        wall_fixture("A2", k=1, l=1),
        wall_fixture("A3", n=1),
        envelope(EnvelopeSpec(k_plus_ck(1), 2)),
        envelope(EnvelopeSpec(k_plus_ck(1), 3)),
    ]


def build_variety_corpus() -> List[GradedAlgebra]:
    """Z2-graded algebras C for the variety-equivalence triangle."""
    return [
        trivial_algebra(),
        k_plus_ck(1),
        k_plus_ck(-1),
        k_plus_ck(2),
        direct_sum(k_plus_ck(1), odd_nilpotent()).renamed("K+cK (+) K+tK"),
        direct_sum(k_plus_ck(1), truncated_polynomial(2)).renamed("K+cK (+) K[x]/(x^2)"),
        odd_nilpotent(),
        poly_quotient(3),
        direct_sum(trivial_algebra(), trivial_algebra()).renamed("K (+) K"),
        truncated_polynomial(3),
        wall_fixture("A2", k=1, l=1),
    ]


@pytest.fixture(scope="session")
def corpus() -> List[GradedAlgebra]:
    return build_corpus()


@pytest.fixture(scope="session")
def z2_corpus() -> List[GradedAlgebra]:
    return build_z2_corpus()


@pytest.fixture(scope="session")
def variety_corpus() -> List[GradedAlgebra]:
    return build_variety_corpus()


STEP_LOGGING_INI = "gradealg_log_steps"


def pytest_addoption(parser: Any) -> None:  # pragma: no cover - called by pytest while it reads options
    group = parser.getgroup("gradealg", "graded algebra verification")
    group.addoption(
        "--gradealg-log-steps",
        action="store_true",
        dest=STEP_LOGGING_INI,
        default=False,
        help="write a [STEP START]/[STEP END] log record around every verification step",
    )
    parser.addini(STEP_LOGGING_INI, "turn step logging on from the ini file", type="bool", default=False)


def step_logging_requested(config: Any) -> bool:
    """On when --gradealg-log-steps, the ini key or GRADEALG_LOG_STEPS asks for it."""
    if config.getoption(STEP_LOGGING_INI, default=False):
        return True
    return bool(config.getini(STEP_LOGGING_INI)) or is_truthy_env(LOG_STEPS_ENV)


def pytest_configure(config: Any) -> None:  # pragma: no cover - called by pytest at startup
    set_step_logging(step_logging_requested(config))
