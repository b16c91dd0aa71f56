"""Suite registry and timing."""

from __future__ import annotations

import time
from collections.abc import Callable

from . import metatheory, suites
from .config import GenConfig
from .report import SuiteReport

SUITES: dict[str, Callable[[GenConfig], SuiteReport]] = {**suites.SUITES, **metatheory.SUITES}


def run_suite(name: str, cfg: GenConfig) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    start = time.perf_counter()
    report = SUITES[name](cfg)
    report.duration = time.perf_counter() - start
    return report
