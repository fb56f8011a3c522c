"""Gowers uniformity norms on finite abelian groups."""

from ._core import (
    BudgetError,
    ConfigError,
    ConsistencyError,
    Error,
    Expr,
    Group,
    ParseError,
    Subgroup,
    Table,
    ap_average,
    evaluate,
    full_subgroup,
    generate,
    gowers_norm,
    gowers_power,
    parse_expr,
    progression_average,
    refine_chain,
    relative_gowers_norm,
    run_trace,
    selftest,
    set_budget,
    set_threads,
    subgroup,
    szemeredi_witness,
    trivial_subgroup,
    u2_fourier,
    vonneumann_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
