"""Complete exponential sums, their averages, square-free weights, and the
trigonometric polynomials S, W, Q of the circle-method identities.

Sums over residue space go through a value histogram: the residues of f over
(Z/qZ)^n are tallied once, after which every character sum against f costs
O(q) multiplications against a precomputed table of q-th roots of unity.
The square-free weights g(q, d) and G(q) are exact rationals throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .counting import BudgetExceededError, primes_in_interval, squarefree_table
from .intervals import value_range
from .poly import Box, MultiPoly, PolynomialError


def _value_histogram(f: MultiPoly, q: int, budget: int) -> np.ndarray:
    """Counts of each residue class of f over (Z/qZ)^n, length q."""
    n = f.n_vars
    if q**n > budget:
        raise BudgetExceededError(f"{q}^{n} exceeds budget {budget}")
    hist = np.zeros(q, dtype=np.int64)
    rest_axes = [
        np.arange(q, dtype=np.int64).reshape((1,) * i + (q,) + (1,) * (n - 1 - i))
        for i in range(1, n)
    ]
    chunk_rows = max(1, (1 << 21) // max(1, q ** (n - 1)))
    for start in range(0, q, chunk_rows):
        stop = min(q, start + chunk_rows)
        first = np.arange(start, stop, dtype=np.int64).reshape(
            (-1,) + (1,) * (n - 1)
        )
        vals = f.evaluate_array([first] + rest_axes, modulus=q)
        hist += np.bincount(vals.ravel(), minlength=q)
    return hist


@lru_cache(maxsize=64)
def _root_table(q: int) -> np.ndarray:
    """exp(2 pi i k / q) for k = 0..q-1."""
    return np.exp(2j * np.pi * np.arange(q) / q)


def complete_exp_sum(
    f: MultiPoly, a: int, q: int, budget: int = 10**8
) -> complex:
    """S_{a,q} = sum over (Z/qZ)^n of e(a f(x) / q)."""
    if q < 1:
        raise ValueError("q must be positive")
    if q == 1:
        return complex(1.0)
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd({a}, {q}) != 1")
    hist = _value_histogram(f, q, budget)
    roots = _root_table(q)
    idx = (a % q) * np.arange(q) % q
    return complex(np.sum(hist * roots[idx]))


@dataclass
class ExpSumTable:
    """S_{a,q} for all a in [0, q) coprime to q."""

    q: int
    values: dict[int, complex]

    @classmethod
    def build(cls, f: MultiPoly, q: int, budget: int = 10**8) -> "ExpSumTable":
        if q == 1:
            return cls(1, {0: complex(1.0)})
        hist = _value_histogram(f, q, budget)
        roots = _root_table(q)
        ks = np.arange(q)
        values = {}
        for a in range(q):
            if math.gcd(a, q) == 1:
                values[a] = complex(np.sum(hist * roots[a * ks % q]))
        return cls(q, values)

    def csv_rows(self) -> list[list[str]]:
        rows = [["q", "a", "re", "im"]]
        for a in sorted(self.values):
            v = self.values[a]
            rows.append([str(self.q), str(a), repr(v.real), repr(v.imag)])
        return rows


def t_f(f: MultiPoly, q: int, budget: int = 10**8) -> float:
    """T_f(q) = q^{-n} * sum over a coprime to q of |S_{a,q}|."""
    if q == 1:
        return 1.0
    n = f.n_vars
    if q**n * _phi(q) > budget * 8:
        raise BudgetExceededError("T_f budget exceeded")
    hist = _value_histogram(f, q, budget)
    # fft(hist)[a] = sum_c hist[c] e(-2 pi i a c / q) = conj(S_{a,q})
    spectrum = np.fft.fft(hist)
    coprime = np.array([a for a in range(q) if math.gcd(a, q) == 1])
    return float(np.sum(np.abs(spectrum[coprime]))) / q**n


def _phi(q: int) -> int:
    result = q
    m = q
    p = 2
    while p * p <= m:
        if m % p == 0:
            result -= result // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _factorize(q: int) -> dict[int, int]:
    out: dict[int, int] = {}
    m = q
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Square-free weights g(q, d) and G(q)
# ---------------------------------------------------------------------------


def g_local(q: int, d: int) -> Fraction:
    """The multiplicative weight g(q, d) for d | q, assembled prime by prime.

    At a prime power (l = v_p(q), m = v_p(d)) the defining relation is
    p^l (1 - p^{-2}) g = 0, 1, or 1 - p^{l-2} according to whether
    l >= m >= 2, m < min(2, l), or l = m <= 1.
    """
    if q < 1 or d < 1 or q % d != 0:
        raise ValueError(f"{d} does not divide {q}")
    value = Fraction(1)
    for p, l in _factorize(q).items():
        m = 0
        dd = d
        while dd % p == 0:
            m += 1
            dd //= p
        value *= _g_prime_power(p, l, m)
    return value


def _g_prime_power(p: int, l: int, m: int) -> Fraction:
    if l >= m >= 2:
        numerator = Fraction(0)
    elif m < min(2, l):
        numerator = Fraction(1)
    elif l == m and l <= 1:
        numerator = 1 - Fraction(p) ** (l - 2)
    else:
        raise ValueError(f"invalid case l={l}, m={m} at p={p}")
    return numerator / (Fraction(p) ** l * (1 - Fraction(1, p * p)))


def _mobius(q: int) -> int:
    factors = _factorize(q)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def big_g_from_definition(q: int) -> Fraction:
    """G(q) = sum over b in [1, q] of e(b/q) g(q, gcd(b, q)), exactly.

    Grouping b by gcd(b, q) = d turns the inner character sum into the
    Ramanujan sum c_{q/d}(1) = mu(q/d), so the total stays rational.
    """
    if q == 1:
        return Fraction(1)
    total = Fraction(0)
    for d in _divisors(q):
        total += _mobius(q // d) * g_local(q, d)
    return total


def big_g(q: int) -> Fraction:
    """G(q) via multiplicativity: G(p) = G(p^2) = -p^{-2} (1 - p^{-2})^{-1},
    zero on non-cube-free q.  Cross-checked against the defining sum for
    q <= 10^4."""
    if q < 1:
        raise ValueError("q must be positive")
    if q == 1:
        return Fraction(1)
    value = Fraction(1)
    for p, e in _factorize(q).items():
        if e >= 3:
            value = Fraction(0)
            break
        value *= -Fraction(1, p * p) / (1 - Fraction(1, p * p))
    if q <= 10**4:
        assert value == big_g_from_definition(q), f"G({q}) route mismatch"
    return value


def _divisors(q: int) -> list[int]:
    divs = [1]
    for p, e in _factorize(q).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# Trigonometric polynomials S, W, Q
# ---------------------------------------------------------------------------


def _lattice_values(
    f: MultiPoly, box: Box, P: int, budget: int
) -> np.ndarray:
    ranges = box.lattice_ranges(P)
    total = 1
    for r in ranges:
        total *= max(0, len(r))
    if total > budget:
        raise BudgetExceededError(f"{total} lattice points exceed budget")
    if total == 0:
        return np.empty(0, dtype=np.int64)
    n = f.n_vars
    coords = [
        np.arange(r.start, r.stop).reshape((1,) * i + (-1,) + (1,) * (n - 1 - i))
        for i, r in enumerate(ranges)
    ]
    return f.evaluate_array(coords).ravel()


def w_interval(f: MultiPoly, box: Box, P: int) -> tuple[int, int]:
    """Prime support [P^d min(f0)/2, 2 P^d max(f0)] of the W-sum (outer
    integer bounds from certified range enclosures)."""
    f0 = f.top_degree_part()
    lo, hi = value_range(f0, box)
    d = f.degree
    lo_int = math.floor(Fraction(lo) * P**d / 2)
    hi_int = math.ceil(2 * Fraction(hi) * P**d)
    return lo_int, hi_int


def q_interval(f: MultiPoly, box: Box, P: int) -> tuple[int, int]:
    """Square-free support [(min(f0)-1) P^d, (max(f0)+1) P^d] of the Q-sum."""
    f0 = f.top_degree_part()
    lo, hi = value_range(f0, box)
    d = f.degree
    return (
        math.floor((Fraction(lo) - 1) * P**d),
        math.ceil((Fraction(hi) + 1) * P**d),
    )


def s_alpha(
    f: MultiPoly, box: Box, P: int, alpha: float, budget: int = 10**8
) -> complex:
    """S(alpha) = sum over Z^n intersect P*B of e(alpha f(x))."""
    values = _lattice_values(f, box, P, budget)
    return complex(np.sum(np.exp(2j * np.pi * alpha * values.astype(np.float64))))


def w_alpha(
    f: MultiPoly, box: Box, P: int, alpha: float, budget: int = 10**9
) -> complex:
    """W(alpha) = sum of e(alpha p) over primes p in the W-interval."""
    lo, hi = w_interval(f, box, P)
    if hi - lo > budget:
        raise BudgetExceededError("W-interval too long")
    primes = primes_in_interval(max(lo, 2), hi)
    return complex(np.sum(np.exp(2j * np.pi * alpha * primes.astype(np.float64))))


def q_alpha_interval(lo: int, hi: int, alpha: float, budget: int = 10**9) -> complex:
    """Q(alpha) over an explicit integer interval of square-free m != 0."""
    if hi - lo > budget:
        raise BudgetExceededError("Q-interval too long")
    ms = np.arange(lo, hi + 1, dtype=np.int64)
    ms = ms[ms != 0]
    table = squarefree_table(int(np.abs(ms).max()) + 1)
    ms = ms[table[np.abs(ms)]]
    return complex(np.sum(np.exp(2j * np.pi * alpha * ms.astype(np.float64))))


def q_alpha(
    f: MultiPoly, box: Box, P: int, alpha: float, budget: int = 10**9
) -> complex:
    lo, hi = q_interval(f, box, P)
    return q_alpha_interval(lo, hi, alpha, budget)


def trig_poly_eval(kind: str, params: dict, alpha: float) -> complex:
    """Dispatcher over the three trigonometric polynomials.

    kind 'S' and 'W' expect params {f, box, P}; kind 'Q' expects either
    {f, box, P} or an explicit interval {lo, hi}.
    """
    if kind == "S":
        return s_alpha(params["f"], params["box"], params["P"], alpha)
    if kind == "W":
        return w_alpha(params["f"], params["box"], params["P"], alpha)
    if kind == "Q":
        if "lo" in params:
            return q_alpha_interval(params["lo"], params["hi"], alpha)
        return q_alpha(params["f"], params["box"], params["P"], alpha)
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------


def orthogonality_count(
    f: MultiPoly, box: Box, P: int, budget: int = 10**8
) -> int:
    """pi_f(P*B) recovered from (1/N) sum_j S(j/N) conj(W(j/N)).

    With N exceeding every frequency, discrete orthogonality of e(.) makes
    the Riemann sum exact; the result is rounded to the nearest integer and
    the residual is asserted below 1e-6.
    """
    values = _lattice_values(f, box, P, budget)
    if len(values) == 0:
        return 0
    lo, hi = w_interval(f, box, P)
    primes = primes_in_interval(max(lo, 2), hi)
    v_min = int(values.min())
    m_max = max(int(values.max()), int(primes.max()) if len(primes) else 0)
    shift = -min(v_min, 0)
    n_grid = m_max + shift + 1
    if n_grid > budget:
        raise BudgetExceededError("orthogonality grid too large")
    hist_v = np.bincount(values + shift, minlength=n_grid)
    hist_p = np.bincount(primes + shift, minlength=n_grid) if len(primes) else (
        np.zeros(n_grid, dtype=np.int64)
    )
    s_spec = np.fft.fft(hist_v)
    w_spec = np.fft.fft(hist_p)
    total = np.sum(s_spec * np.conj(w_spec)) / n_grid
    count = int(round(total.real))
    residual = abs(total - count)
    assert residual < 1e-6, f"orthogonality residual {residual}"
    return count


def observatory_check(
    f: MultiPoly, p: int, budget: int = 10**8
) -> tuple[float, int]:
    """Both sides of sum_{a in (Z/pZ)*} S_{a,p} = -p^n + p * N_p.

    Returns (lhs real part, rhs); the imaginary part of the lhs and the
    lhs-rhs gap are asserted below 1e-6 * p^n.
    """
    n = f.n_vars
    hist = _value_histogram(f, p, budget)
    roots = _root_table(p)
    ks = np.arange(p)
    lhs = 0j
    for a in range(1, p):
        lhs += np.sum(hist * roots[a * ks % p])
    rhs = -(p**n) + p * int(hist[0])
    tol = 1e-6 * p**n
    assert abs(lhs.imag) < tol, f"imaginary residue {lhs.imag}"
    assert abs(lhs.real - rhs) < tol, f"observatory mismatch {lhs.real} vs {rhs}"
    return float(lhs.real), rhs


def tf_gq_csv_rows(f: MultiPoly, qs) -> list[list[str]]:
    rows = [["q", "T_f", "G"]]
    for q in qs:
        rows.append([str(q), repr(t_f(f, q)), str(big_g(q))])
    return rows
