"""Matrix-size budgets.

Limits are counted in matrix entries (rows x cols), whether or not the matrix
is stored sparsely.  ``BLOCKCOH_BUDGET`` overrides them: either a single
integer applied to both entry limits, or comma-separated ``key=value`` pairs
with keys ``gf2``, ``other``, ``hh_n1``, ``hh_n2``, ``hh_n3``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Budget:
    gf2: int = 2 * 10**8
    other: int = 5 * 10**7
    hh_n1: int = 24    # largest |G| for HH in degree <= 1
    hh_n2: int = 12    # largest |G| for HH in degree 2
    hh_n3: int = 8     # largest |G| for HH in degree >= 3

    @classmethod
    def from_env(cls, value=None):
        value = os.environ.get("BLOCKCOH_BUDGET") if value is None else value
        b = cls()
        if not value:
            return b
        value = value.strip()
        if "=" not in value:
            n = int(float(value))
            return replace(b, gf2=n, other=n)
        kw = {}
        for part in value.split(","):
            key, _, num = part.partition("=")
            key = key.strip()
            if key not in ("gf2", "other", "hh_n1", "hh_n2", "hh_n3"):
                raise ValueError(f"unknown budget key {key!r}")
            kw[key] = int(float(num))
        return replace(b, **kw)

    def check_matrix(self, rows, cols, field, what):
        limit = self.gf2 if field.q == 2 else self.other
        entries = rows * cols
        if entries > limit:
            raise BudgetExceeded(
                f"{what}: matrix {rows} x {cols} = {entries} entries exceeds the budget of {limit} "
                f"over {field.name} (set BLOCKCOH_BUDGET to raise it)")

    def check_hh(self, order, n):
        cap = self.hh_n1 if n <= 1 else self.hh_n2 if n == 2 else self.hh_n3
        if order > cap:
            raise BudgetExceeded(
                f"Hochschild cohomology of a group of order {order} in degree {n} exceeds the cap "
                f"(|G| <= {cap}; set BLOCKCOH_BUDGET to raise it)")


_current = None


def current() -> Budget:
    global _current
    if _current is None:
        _current = Budget.from_env()
    return _current


def set_budget(b: Budget | None):
    """Install a budget (None re-reads the environment on next use)."""
    global _current
    _current = b
