"""Registered catalog of certified named constants.

Each entry maps one acceptance-grade quantity to the formula route that
produces it, so continuous verification is a single catalog walk.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import UnknownConstant
from .estimator import E_alpha_v, critical_estimate, squarefree_count_bound
from .eulerprod import (
    get_preset,
    hbar_error_product,
    mathfrak_a,
    mathfrak_b,
    ramare_product,
)
from .interval import Interval
from .supsearch import verified_sup_weighted_residual
from .tailconst import delta_constant


@dataclass(frozen=True)
class ConstantResult:
    name: str
    value: Interval
    prime_limit: int


def _error_sum1(prime_limit: int, threads: int) -> Interval:
    f = get_preset("one_over_phi")
    d = Fraction(1, 3)
    return delta_constant(1, d).value * hbar_error_product(f, 1, d, prime_limit, threads)


_CATALOG: dict[str, Callable[[int, int], Interval]] = {
    "a1": lambda pl, th: mathfrak_a(1, pl, threads=th),
    "b1": lambda pl, th: mathfrak_b(1, pl, threads=th),
    "b2": lambda pl, th: mathfrak_b(2, pl, threads=th),
    "error_sum1": _error_sum1,
    "prod_ram": lambda pl, th: ramare_product(pl, accelerate=True, threads=th),
    "c2_sup": lambda pl, th: verified_sup_weighted_residual(
        2, 1573, prime_limit=pl, threads=th
    ).bound,
    "E_1_1": lambda pl, th: E_alpha_v(1, 1, pl),
    "E_1_2": lambda pl, th: E_alpha_v(1, 2, pl),
    "E_2_1": lambda pl, th: E_alpha_v(2, 1, pl),
    "E_2_2": lambda pl, th: E_alpha_v(2, 2, pl),
    "H1": lambda pl, th: squarefree_count_bound(1),
    "H2": lambda pl, th: squarefree_count_bound(2),
    "consequences_odd": lambda pl, th: critical_estimate(
        get_preset("one_over_phi"), 1, pl, th
    ).error_constant,
    "consequences_even": lambda pl, th: critical_estimate(
        get_preset("one_over_phi"), 2, pl, th
    ).error_constant,
}


def constant_names() -> list[str]:
    return list(_CATALOG)


def compute_constant(name: str, prime_limit: int, threads: int = 1) -> ConstantResult:
    if name not in _CATALOG:
        raise UnknownConstant(f"{name!r}; known: {', '.join(constant_names())}")
    value = _CATALOG[name](prime_limit, threads)
    return ConstantResult(name=name, value=value, prime_limit=prime_limit)
