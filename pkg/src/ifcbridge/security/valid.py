"""Validity: no flow-sensitive address reaches past the heap bound."""

from __future__ import annotations

from collections.abc import Sequence

from .. import cg, fg
from ..cg.eval import CGFinal
from ..fg.eval import FGFinal
from ..state import Store


def valid_fg_raw(n: int, r: fg.Raw) -> bool:
    match r:
        case fg.RefS(addr):
            return addr < n
        case fg.InlR(_, v) | fg.InrR(_, v):
            return valid_fg_value(n, v)
        case fg.PairR(a, b):
            return valid_fg_value(n, a) and valid_fg_value(n, b)
        case fg.Clo(_, _, env):
            return valid_fg_env(n, env)
    return True


def valid_fg_value(n: int, v: fg.Value) -> bool:
    return valid_fg_raw(n, v.raw)


def valid_fg_env(n: int, env: Sequence[fg.Value]) -> bool:
    return all(valid_fg_value(n, v) for v in env)


def valid_fg_store(n: int, store: Store[fg.Raw]) -> bool:
    return all(valid_fg_raw(n, r) for _, mem in store for r in mem)


def valid_fg_heap(n: int, heap: Sequence[fg.Value]) -> bool:
    return all(valid_fg_value(n, v) for v in heap)


def valid_cg_value(n: int, v: cg.Value) -> bool:
    match v:
        case cg.RefSV(addr):
            return addr < n
        case cg.InlV(_, w) | cg.InrV(_, w) | cg.LabeledV(_, w):
            return valid_cg_value(n, w)
        case cg.PairV(a, b):
            return valid_cg_value(n, a) and valid_cg_value(n, b)
        case cg.FunClo(_, _, env) | cg.ThunkClo(_, env):
            return valid_cg_env(n, env)
    return True


def valid_cg_env(n: int, env: Sequence[cg.Value]) -> bool:
    return all(valid_cg_value(n, v) for v in env)


def valid_cg_store(n: int, store: Store[cg.Value]) -> bool:
    return all(valid_cg_value(n, v) for _, mem in store for v in mem)


def valid_cg_heap(n: int, heap: Sequence[cg.Value]) -> bool:
    return all(valid_cg_value(n, v) for v in heap)


def valid(n: int, x) -> bool:
    """Validity of a single value of either calculus (raw FG values included)."""
    match x:
        case fg.Value():
            return valid_fg_value(n, x)
        case fg.Raw():
            return valid_fg_raw(n, x)
        case cg.Value():
            return valid_cg_value(n, x)
    raise TypeError(f"valid: unsupported {type(x).__name__}")


def valid_inputs_fg(store: Store[fg.Raw], heap: Sequence[fg.Value], env: Sequence[fg.Value]) -> bool:
    n = len(heap)
    return valid_fg_store(n, store) and valid_fg_heap(n, heap) and valid_fg_env(n, env)


def valid_outputs_fg(c: FGFinal) -> bool:
    n = len(c.heap)
    return valid_fg_store(n, c.store) and valid_fg_heap(n, c.heap) and valid_fg_value(n, c.value)


def valid_inputs_cg(store: Store[cg.Value], heap: Sequence[cg.Value], env: Sequence[cg.Value]) -> bool:
    n = len(heap)
    return valid_cg_store(n, store) and valid_cg_heap(n, heap) and valid_cg_env(n, env)


def valid_outputs_cg(c: CGFinal) -> bool:
    n = len(c.heap)
    return valid_cg_store(n, c.store) and valid_cg_heap(n, c.heap) and valid_cg_value(n, c.value)
