"""Translations between the two calculi."""

from .cg2fg import (
    cg2fg_ctx, cg2fg_env, cg2fg_expr, cg2fg_heap, cg2fg_raw, cg2fg_state, cg2fg_store,
    cg2fg_thunk, cg2fg_type, cg2fg_value,
)
from .fg2cg import (
    fg2cg_ctx, fg2cg_env, fg2cg_expr, fg2cg_heap, fg2cg_raw, fg2cg_state, fg2cg_store,
    fg2cg_type, fg2cg_value,
)
