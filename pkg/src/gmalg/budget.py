"""Resource budgets guarding exhaustive basis-tuple scans.

Predicates walk on the order of d**(n+1) basis tuples and full-space
computations solve systems with ell*d**(n-1) unknowns; both are capped so a
careless arity never silently degrades into sampling. ``GMALG_BUDGET``
overrides the tuple cap; the unknown cap scales with it (one tenth).
"""

import os

from .errors import BudgetExceededError

ENV_VAR = "GMALG_BUDGET"

DEFAULT_TUPLE_BUDGET = 100_000
DEFAULT_UNKNOWN_BUDGET = 10_000


def tuple_budget() -> int:
    raw = os.environ.get(ENV_VAR)
    return int(raw) if raw else DEFAULT_TUPLE_BUDGET


def unknown_budget() -> int:
    raw = os.environ.get(ENV_VAR)
    return max(1, int(raw) // 10) if raw else DEFAULT_UNKNOWN_BUDGET


def guard_tuples(what: str, required: int) -> None:
    allowed = tuple_budget()
    if required > allowed:
        raise BudgetExceededError(what, required, allowed)


def guard_unknowns(what: str, required: int) -> None:
    allowed = unknown_budget()
    if required > allowed:
        raise BudgetExceededError(what, required, allowed)
