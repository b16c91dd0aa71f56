"""Fine-grained dynamic IFC calculus."""

from .eval import FG_MUTANTS, FGFinal, FGOutcome, eval_fg
from .syntax import (
    FALSE, TRUE, App, Case, Expr, Fst, GetLabel, Inl, Inr, LabelLeq, LabelLit, LabelOf,
    LabelOfRef, Lam, New, Pair, Read, Snd, Taint, Unit, Var, Wken, Write, if_, let, seq, shift, size,
)
from .typecheck import infer_env, subterm_types, typecheck_fg, value_has_type
from .values import (
    Clo, Env, InlR, InrR, LabelR, PairR, Raw, RefI, RefS, UnitR, Value, raise_label, show_value,
)
