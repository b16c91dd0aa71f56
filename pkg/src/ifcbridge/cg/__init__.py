"""Coarse-grained dynamic IFC calculus."""

from .eval import CG_MUTANTS, CGFinal, CGOutcome, PureFinal, eval_force, eval_pure, eval_thunk
from .syntax import (
    FALSE, TRUE, App, Bind, Case, Expr, Fst, GetLabel, Inl, Inr, LabelLeq, LabelLit, LabelOf,
    LabelOfRef, Lam, New, Pair, Read, Return, Snd, Taint, Thunk, ToLabeled, Unit, Unlabel, Var,
    Wken, Write, if_, shift, size, then,
)
from .typecheck import infer_env, subterm_types, typecheck_cg, value_has_type
from .values import (
    Env, FunClo, InlV, InrV, LabeledV, LabelV, PairV, RefIV, RefSV, ThunkClo, UnitV, Value,
    show_value,
)
