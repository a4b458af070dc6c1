"""Point counts modulo p and p^2 and the non-archimedean Euler products.

Counting is exact exhaustive enumeration, vectorised with numpy.  Counts
modulo p^2 enumerate the full fiber above every root modulo p (a solution
modulo p^2 must reduce to one modulo p), which keeps the sweep exhaustive
while skipping residues that cannot contribute.

Euler factors are exact rationals; partial products are accumulated as
exact rationals as well, so there is no drift over thousands of factors.
The tail bound is empirical: the decay exponent comes from the convergence
analysis and the constant is calibrated on the last computed factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .counting import BudgetExceededError, primes_upto
from .poly import MultiPoly, PolynomialError, SigmaEstimate

_CHUNK = 1 << 21  # residues per vectorised chunk


def _grid_mask_zero(f: MultiPoly, m: int, n: int) -> int:
    """#{x in (Z/mZ)^n : f(x) = 0} by full enumeration, chunked on axis 0."""
    rest = m ** (n - 1)
    chunk_rows = max(1, _CHUNK // max(1, rest))
    total = 0
    rest_axes = [
        np.arange(m, dtype=np.int64).reshape((1,) * i + (m,) + (1,) * (n - 1 - i))
        for i in range(1, n)
    ]
    for start in range(0, m, chunk_rows):
        stop = min(m, start + chunk_rows)
        first = np.arange(start, stop, dtype=np.int64).reshape(
            (-1,) + (1,) * (n - 1)
        )
        vals = f.evaluate_array([first] + rest_axes, modulus=m)
        total += int((vals == 0).sum())
    return total


def _roots_mod(f: MultiPoly, p: int, n: int) -> np.ndarray:
    """All x in F_p^n with f(x) = 0, as an (N, n) array."""
    rest_axes = [
        np.arange(p, dtype=np.int64).reshape((1,) * i + (p,) + (1,) * (n - 1 - i))
        for i in range(1, n)
    ]
    roots = []
    chunk_rows = max(1, _CHUNK // max(1, p ** (n - 1)))
    for start in range(0, p, chunk_rows):
        stop = min(p, start + chunk_rows)
        first = np.arange(start, stop, dtype=np.int64).reshape(
            (-1,) + (1,) * (n - 1)
        )
        vals = f.evaluate_array([first] + rest_axes, modulus=p)
        idx = np.argwhere(vals == 0)
        if len(idx):
            idx[:, 0] += start
            roots.append(idx)
    if not roots:
        return np.empty((0, n), dtype=np.int64)
    return np.concatenate(roots)


def count_zeros_mod(f: MultiPoly, modulus: int, budget: int = 10**8) -> int:
    """Exact #{x in (Z/modulus Z)^n : f(x) = 0} for modulus p or p^2."""
    n = f.n_vars
    p, k = _prime_power_shape(modulus)
    if k == 1:
        if modulus**n > budget:
            raise BudgetExceededError(f"{modulus}^{n} exceeds budget {budget}")
        return _grid_mask_zero(f, modulus, n)
    # modulus = p^2: lift roots mod p.  Where some partial derivative is a
    # unit mod p, Hensel gives exactly p^(n-1) lifts; the remaining
    # (singular) roots get their full fiber enumerated.
    if p**n > budget:
        raise BudgetExceededError(f"{p}^{n} exceeds budget {budget}")
    roots = _roots_mod(f, p, n)
    if len(roots) == 0:
        return 0
    singular = np.ones(len(roots), dtype=bool)
    for g in f.gradient():
        if g is None:
            continue
        vals = g.evaluate_array(
            [roots[:, i] for i in range(n)], modulus=p
        )
        singular &= vals == 0
    total = int((~singular).sum()) * p ** (n - 1)
    roots = roots[singular]
    work = len(roots) * p**n
    if work > budget:
        raise BudgetExceededError(f"fiber sweep {work} exceeds budget {budget}")
    if len(roots) == 0:
        return total
    lift_axes = [
        np.arange(p, dtype=np.int64).reshape((1,) * i + (p,) + (1,) * (n - 1 - i))
        for i in range(n)
    ]
    chunk_roots = max(1, _CHUNK // max(1, p**n))
    for start in range(0, len(roots), chunk_roots):
        block = roots[start : start + chunk_roots]
        coords = [
            block[:, i].reshape((-1,) + (1,) * n) + p * lift_axes[i][None, ...]
            for i in range(n)
        ]
        vals = f.evaluate_array(coords, modulus=modulus)
        total += int((vals == 0).sum())
    return total


def _prime_power_shape(modulus: int) -> tuple[int, int]:
    """(p, k) with modulus = p^k, k in {1, 2}; error otherwise."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    r = math.isqrt(modulus)
    if r * r == modulus and _is_small_prime(r):
        return r, 2
    if _is_small_prime(modulus):
        return modulus, 1
    raise ValueError(f"modulus {modulus} is not p or p^2 for a prime p")


def _is_small_prime(m: int) -> bool:
    if m < 2:
        return False
    for q in range(2, math.isqrt(m) + 1):
        if m % q == 0:
            return False
    return True


def fixed_prime_divisors(f: MultiPoly) -> set[int]:
    """Primes p with p | f(x) for every integer x; all are <= deg(f)."""
    if f.content() != 1:
        raise PolynomialError("divide out the content first")
    d = f.degree
    out = set()
    for p in map(int, primes_upto(d)):
        if count_zeros_mod(f, p) == p**f.n_vars:
            out.add(p)
    return out


# ---------------------------------------------------------------------------
# Euler factors and products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalFactor:
    p: int
    value: Fraction
    raw_counts: dict = field(default_factory=dict)

    @property
    def value_float(self) -> float:
        return float(self.value)


def prime_euler_factor(f: MultiPoly, p: int, budget: int = 10**8) -> LocalFactor:
    """(1 - N_p / p^n) / (1 - 1/p) with N_p = #{f = 0 over F_p^n}."""
    n = f.n_vars
    count = count_zeros_mod(f, p, budget)
    value = (1 - Fraction(count, p**n)) / (1 - Fraction(1, p))
    return LocalFactor(p=p, value=value, raw_counts={"N_p": count})


def squarefree_euler_factor(f: MultiPoly, p: int, budget: int = 10**8) -> LocalFactor:
    """1 - N_{p^2} / p^{2n} with N_{p^2} = #{f = 0 over (Z/p^2 Z)^n}."""
    n = f.n_vars
    count = count_zeros_mod(f, p * p, budget)
    value = 1 - Fraction(count, p ** (2 * n))
    return LocalFactor(p=p, value=value, raw_counts={"N_p2": count})


def joint_euler_factor(
    polys: Sequence[MultiPoly], p: int, budget: int = 10**8
) -> LocalFactor:
    """(1 - N_p / p^n) / (1 - 1/p)^r with N_p counting zeros of the product.

    The union of the r zero sets is swept once via the product polynomial,
    which realises the inclusion-exclusion over the individual sets.
    """
    n = polys[0].n_vars
    prod = polys[0]
    for g in polys[1:]:
        prod = prod * g
    count = count_zeros_mod(prod, p, budget)
    r = len(polys)
    value = (1 - Fraction(count, p**n)) / (1 - Fraction(1, p)) ** r
    return LocalFactor(p=p, value=value, raw_counts={"N_p": count})


@dataclass
class EulerProductEstimate:
    value: float
    value_exact: Fraction
    cutoff: int
    tail_bound: float
    decay_exponent: float
    tail_constant: float
    mode: str
    heuristic: bool = False
    factors: list[LocalFactor] = field(default_factory=list)


class HypothesisViolationError(RuntimeError):
    """A convergence hypothesis failed and no force flag was given."""


def euler_product(
    f: MultiPoly | Sequence[MultiPoly],
    mode: str,
    cutoff: int,
    sigma: SigmaEstimate | int | None = None,
    budget: int = 10**8,
    force: bool = False,
    keep_factors: bool = False,
) -> EulerProductEstimate:
    """Truncated singular series over p <= cutoff, with an empirical tail.

    Modes: 'prime-density' (needs n - sigma_f >= 3 for convergence, else
    force), 'squarefree-density', 'joint'.  The tail bound is
    C * sum_{p > cutoff} p^{-e} with e = min(2, (n - sigma_f)/2) and C fitted
    on the deviation of the last ten computed factors from 1; when that
    exponent would make the sum divergent the tail falls back to e = 2 and
    the estimate is flagged heuristic.
    """
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    polys = list(f) if isinstance(f, (list, tuple)) else [f]
    n = polys[0].n_vars
    sigma_val = _sigma_value(sigma)
    heuristic = False
    if mode == "prime-density":
        if n - sigma_val < 3:
            if not force:
                raise HypothesisViolationError(
                    f"n - sigma_f = {n - sigma_val} < 3; pass force=True for a "
                    "heuristic truncation"
                )
            heuristic = True
    elif mode not in ("squarefree-density", "joint"):
        raise ValueError(f"unknown mode {mode!r}")

    value = Fraction(1)
    factors: list[LocalFactor] = []
    tail_window: list[LocalFactor] = []
    for p in map(int, primes_upto(cutoff)):
        if mode == "prime-density":
            factor = prime_euler_factor(polys[0], p, budget)
        elif mode == "squarefree-density":
            factor = squarefree_euler_factor(polys[0], p, budget)
        else:
            factor = joint_euler_factor(polys, p, budget)
        value *= factor.value
        tail_window.append(factor)
        if len(tail_window) > 10:
            tail_window.pop(0)
        if keep_factors:
            factors.append(factor)

    exponent = min(2.0, (n - sigma_val) / 2)
    if exponent <= 1.05:
        # the nominal exponent gives a divergent tail sum; fall back
        exponent = 2.0
        heuristic = True
    c = 0.0
    for factor in tail_window:
        c = max(c, abs(float(factor.value) - 1.0) * factor.p**exponent)
    tail = c * _prime_tail_sum(cutoff, exponent)
    return EulerProductEstimate(
        value=float(value),
        value_exact=value,
        cutoff=cutoff,
        tail_bound=tail,
        decay_exponent=exponent,
        tail_constant=c,
        mode=mode,
        heuristic=heuristic,
        factors=factors,
    )


def _sigma_value(sigma) -> int:
    if sigma is None:
        return 0
    if isinstance(sigma, SigmaEstimate):
        return sigma.value
    return int(sigma)


def _prime_tail_sum(x: int, e: float) -> float:
    """Estimate of sum over primes p > x of p^{-e} (prime-counting density)."""
    if e <= 1:
        return math.inf
    return x ** (1 - e) / ((e - 1) * math.log(x))


def factors_to_csv_rows(factors: Sequence[LocalFactor]) -> list[list[str]]:
    rows = [["p", "N_p", "N_p2", "factor_value"]]
    for factor in factors:
        rows.append(
            [
                str(factor.p),
                str(factor.raw_counts.get("N_p", "")),
                str(factor.raw_counts.get("N_p2", "")),
                repr(float(factor.value)),
            ]
        )
    return rows
