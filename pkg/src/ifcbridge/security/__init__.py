"""Bijections, L-equivalence, validity, bijection search and cross-language equivalence."""

from .bijection import (
    EMPTY, Bijection, NotInjective, bij_compose, bij_extends, bij_identity, bij_inverse,
)
from .ceq import (
    ceq, ceq_env, ceq_heap, ceq_memory, ceq_raw, ceq_store, ceq_value, config_rel, state_rel,
)
from .equiv import (
    CGInitial, CGRelation, FGInitial, FGRelation, leq_cg, leq_cg_env, leq_cg_final, leq_cg_heap, leq_cg_initial,
    leq_cg_memory, leq_cg_store, leq_cg_value, leq_fg, leq_fg_env, leq_fg_final, leq_fg_heap,
    leq_fg_initial, leq_fg_memory, leq_fg_raw, leq_fg_store, leq_fg_value,
)
from .search import (
    brute_force_bijections, extensions, find_bijection, find_bijection_cg, find_bijection_fg,
)
from .valid import (
    valid, valid_cg_env, valid_cg_heap, valid_cg_store, valid_cg_value, valid_fg_env,
    valid_fg_heap, valid_fg_raw, valid_fg_store, valid_fg_value, valid_inputs_cg,
    valid_inputs_fg, valid_outputs_cg, valid_outputs_fg,
)
