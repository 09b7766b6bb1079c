"""
Verification steps.

``step(title)`` wraps one check; ``aggregate_step(title)`` keeps running the nested steps after one of
them fails and raises a single :class:`~gradealg.errors.AggregateError` when it closes. Every step is
mirrored as an ``allure.step`` (visible when the code runs under allure-pytest) and, when step logging
is on, logs ``[STEP START]`` / ``[STEP END]`` through the logger of the module that opened it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Type
import logging
import sys
import threading
import types

import allure

from .config import LOG_STEPS_ENV, is_truthy_env
from .errors import AggregateError

_log_steps = is_truthy_env(LOG_STEPS_ENV)


def set_step_logging(enabled: bool) -> None:
    """Switch start/end logging for every step opened from now on."""
    global _log_steps
    _log_steps = bool(enabled)


def step_logging_enabled() -> bool:
    return _log_steps


@dataclass
class _Collector:
    title: str
    failures: List[Exception] = field(default_factory=list)


class _OpenAggregates(threading.local):
    def __init__(self) -> None:
        self.collectors: List[_Collector] = []

    def innermost(self) -> Optional[_Collector]:
        return self.collectors[-1] if self.collectors else None


_open = _OpenAggregates()


class VerificationStep:
    def __init__(self, title: str, caller: types.FrameType) -> None:
        self.title = title
        module = caller.f_globals.get("__name__")
        self._logger = logging.getLogger(module if isinstance(module, str) else "__main__")
        self._report: Any = allure.step(title)

    def __enter__(self) -> "VerificationStep":
        if _log_steps:
            self._logger.info("[STEP START] %r", self.title)
        self._report.__enter__()
        return self

    def _close(self, error: Optional[BaseException]) -> None:
        # allure shows AssertionError as failed and anything else as broken
        if error is None:
            self._report.__exit__(None, None, None)
        else:
            self._report.__exit__(type(error), error, error.__traceback__)
        if _log_steps:
            self._logger.info("[STEP END] %r - %s", self.title, "PASS" if error is None else "FAIL")

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc: Optional[BaseException],
        tb: Optional[types.TracebackType],
    ) -> bool:
        collector = _open.innermost()
        if exc is None or collector is None or not isinstance(exc, Exception):
            self._close(exc)
            return False
        self._close(AssertionError(str(exc)))
        collector.failures.append(exc)
        return True


class AggregateVerificationStep(VerificationStep):
    def __enter__(self) -> "AggregateVerificationStep":
        self._collector = _Collector(self.title)
        _open.collectors.append(self._collector)
        super().__enter__()
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc: Optional[BaseException],
        tb: Optional[types.TracebackType],
    ) -> bool:
        _open.collectors.pop()
        if exc is not None and not isinstance(exc, Exception):
            # KeyboardInterrupt and SystemExit pass straight through
            self._close(exc)
            return False
        failures = self._collector.failures
        if exc is not None:
            failures.append(exc)
        if not failures:
            self._close(None)
            return False

        error = AggregateError(self.title, failures)
        self._close(AssertionError(str(error)))
        parent = _open.innermost()
        if parent is None:
            raise error
        parent.failures.append(error)
        return True


def step(title: str) -> VerificationStep:
    return VerificationStep(title, sys._getframe(1))


def aggregate_step(title: str) -> AggregateVerificationStep:
    return AggregateVerificationStep(title, sys._getframe(1))
