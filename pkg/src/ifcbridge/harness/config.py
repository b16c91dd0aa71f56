"""Generation and suite configuration."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Any

from ..lattice import Label, Lattice, lattice_load

DEFAULT_WEIGHTS: dict[str, float] = {
    "var": 3.0,
    "intro": 2.0,
    "app": 1.5,
    "case": 2.0,
    "let": 2.0,
    "seq": 1.5,
    "proj": 0.7,
    "taint": 1.0,
    "read": 1.2,
    "write": 1.5,
    "label": 1.0,
    "wken": 0.3,
    # coarse-grained thunks
    "return": 1.5,
    "bind": 2.0,
    "unlabel": 2.0,
    "tolabeled": 1.2,
    "new": 1.2,
}


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_size: int = 20
    fuel: int = 5_000
    lattice: str = "two-point"
    attacker: str = "L"
    trials: int = 1_000
    weights: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    flow_sensitive_ratio: float = 0.5
    secret_ratio: float = 0.5
    max_inputs: int = 3
    max_type_depth: int = 2
    mutant: str | None = None

    @cached_property
    def lat(self) -> Lattice:
        return lattice_load(self.lattice)

    @property
    def A(self) -> Label:
        return self.lat[self.attacker]

    def trial_rng(self, trial: int) -> random.Random:
        # str seeds are hashed deterministically, giving independent streams per trial
        return random.Random(f"{self.seed}/{trial}")

    def public_labels(self) -> list[Label]:
        return [p for p in self.lat.points if self.lat.leq(p, self.A)]

    def secret_labels(self) -> list[Label]:
        return [p for p in self.lat.points if not self.lat.leq(p, self.A)]

    def describe(self) -> dict[str, Any]:
        d = asdict(self)
        return d
