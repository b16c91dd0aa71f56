"""Stores, heaps and evaluation outcomes shared by both calculi."""

from __future__ import annotations

import sys
import threading
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any, Generic, TypeVar

from .lattice import Label

T = TypeVar("T")


@dataclass(frozen=True, slots=True)
class Store(Generic[T]):
    """Label-partitioned memories; an absent label means an empty memory.

    Items are kept sorted by label index with empty memories dropped, so
    structural equality coincides with extensional equality.
    """

    items: tuple[tuple[Label, tuple[T, ...]], ...] = ()

    @staticmethod
    def of(mapping: Mapping[Label, Any]) -> Store[Any]:
        items = tuple(
            sorted(((lab, tuple(mem)) for lab, mem in mapping.items() if len(mem) > 0),
                   key=lambda kv: kv[0].index)
        )
        return Store(items)

    def get(self, label: Label) -> tuple[T, ...]:
        for lab, mem in self.items:
            if lab == label:
                return mem
        return ()

    def labels(self) -> list[Label]:
        return [lab for lab, _ in self.items]

    def as_dict(self) -> dict[Label, list[T]]:
        return {lab: list(mem) for lab, mem in self.items}

    def map(self, fn: Callable[[Label, T], Any]) -> Store[Any]:
        return Store(tuple((lab, tuple(fn(lab, x) for x in mem)) for lab, mem in self.items))

    def __iter__(self) -> Iterator[tuple[Label, tuple[T, ...]]]:
        return iter(self.items)


EMPTY_STORE: Store[Any] = Store()


@dataclass(frozen=True, slots=True)
class SecurityAbort:
    rule: str
    check: str
    fuel_used: int = field(default=0, compare=False)

    kind = "abort"


@dataclass(frozen=True, slots=True)
class Timeout:
    fuel_used: int = field(default=0, compare=False)

    kind = "timeout"


@dataclass(frozen=True, slots=True)
class Stuck:
    reason: str
    fuel_used: int = field(default=0, compare=False)

    kind = "stuck"


class Halt(Exception):
    """Raised inside an evaluator to unwind with a non-final outcome."""

    def __init__(self, outcome: SecurityAbort | Timeout | Stuck) -> None:
        super().__init__(outcome)
        self.outcome = outcome


class Fuel:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise Halt(Timeout())


_DEEP_STACK = 512 * 1024 * 1024
_DEEP_LIMIT = 1_000_000


def run_deep(fn: Callable[[], T]) -> T:
    """Call ``fn``; if Python's recursion limit is hit, rerun it on a big-stack thread.

    Evaluators are deterministic and keep all state local, so rerunning is safe.
    """
    try:
        return fn()
    except RecursionError:
        pass
    box: list[tuple[bool, Any]] = []

    def target() -> None:
        try:
            box.append((True, fn()))
        except BaseException as exc:  # re-raised on the calling thread
            box.append((False, exc))

    old_limit = sys.getrecursionlimit()
    old_stack = threading.stack_size(_DEEP_STACK)
    sys.setrecursionlimit(_DEEP_LIMIT)
    try:
        worker = threading.Thread(target=target)
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_stack)
        sys.setrecursionlimit(old_limit)
    ok, payload = box[0]
    if ok:
        return payload
    raise payload
