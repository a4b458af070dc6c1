"""Exact counting of prime, square-free, and joint prime polynomial values.

The enumeration of lattice points is vectorised with numpy and partitioned
into slabs along the first coordinate; slab results are merged in slab order
so that single-threaded and multi-threaded runs are bit-identical.  A fast
int64 path is used whenever an a-priori bound on |f| over the scaled box
certifies that no overflow can occur, and membership tests go through sieve
tables whenever the value range fits in memory.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .poly import Box, MultiPoly, PolynomialError


class BudgetExceededError(RuntimeError):
    """An enumeration or factorisation budget was exceeded."""


class SquarefreeUnknownError(BudgetExceededError):
    """Factorisation budget exceeded; square-freeness undecided."""


# ---------------------------------------------------------------------------
# Primes and sieves
# ---------------------------------------------------------------------------

#: first 13 primes; deterministic Miller-Rabin certificate below this bound
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

_TRIAL_DIVISION_LIMIT = 10**6


def _miller_rabin_witness(n: int, a: int) -> bool:
    """True if a witnesses compositeness of odd n > 2."""
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime_certified(m: int) -> tuple[bool, bool]:
    """(verdict, certified).  Deterministic below MR_DETERMINISTIC_LIMIT."""
    m = int(m)
    if m <= 1:
        return False, True
    if m < 4:
        return True, True
    if m % 2 == 0:
        return False, True
    certified = m < MR_DETERMINISTIC_LIMIT
    if certified:
        bases = [a for a in _MR_BASES if a < m]
    else:
        rng = random.Random(m % (2**32))
        bases = list(_MR_BASES) + [
            rng.randrange(2, m - 1) for _ in range(64 - len(_MR_BASES))
        ]
    for a in bases:
        if _miller_rabin_witness(m, a):
            return False, True
    return True, certified


def is_prime(m: int) -> bool:
    """Exact for |m| below the 13-base deterministic Miller-Rabin bound."""
    return is_prime_certified(m)[0]


@lru_cache(maxsize=8)
def _sieve_bools(limit: int) -> np.ndarray:
    """Boolean primality table for 0..limit-1."""
    table = np.ones(limit, dtype=bool)
    table[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if table[p]:
            table[p * p :: p] = False
    return table


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.empty(0, dtype=np.int64)
    return np.nonzero(_sieve_bools(n + 1))[0].astype(np.int64)


def primes_in_interval(lo: int, hi: int) -> np.ndarray:
    """Primes in [lo, hi], ascending, by segmented sieve."""
    lo, hi = int(lo), int(hi)
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    if hi - lo > 10**9:
        raise BudgetExceededError("interval longer than 1e9")
    lo = max(lo, 2)
    if hi < 2:
        return np.empty(0, dtype=np.int64)
    base = primes_upto(int(math.isqrt(hi)))
    seg = np.ones(hi - lo + 1, dtype=bool)
    for p in base:
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        seg[start - lo :: p] = False
    if lo <= int(math.isqrt(hi)):
        for p in base:
            if lo <= p <= hi:
                seg[int(p) - lo] = True
    return lo + np.nonzero(seg)[0].astype(np.int64)


def squarefree_table(limit: int) -> np.ndarray:
    """Boolean table: index m is True iff m is square-free (0 is not)."""
    table = np.ones(limit, dtype=bool)
    table[0] = False
    for d in range(2, int(limit**0.5) + 1):
        table[d * d :: d * d] = False
    return table


# ---------------------------------------------------------------------------
# Square-free detection for individual integers
# ---------------------------------------------------------------------------


def _pollard_brent(n: int, rng: random.Random, max_iter: int) -> int | None:
    """A nontrivial factor of composite n, or None if the budget runs out."""
    if n % 2 == 0:
        return 2
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g, r, q = 1, 1, 1
    x = ys = y
    count = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
            count += m
            if count > max_iter:
                return None
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
            count += 1
            if count > max_iter:
                return None
    return g if g != n else None


def is_squarefree(m: int, max_rho_iter: int = 10**6) -> bool:
    """m is square-free.  0 is not; m and -m agree.

    Trial division to 1e6, then Pollard's rho (Brent variant) on the
    remaining cofactor.  Raises SquarefreeUnknownError if the factorisation
    budget is exhausted, never guesses.
    """
    m = abs(int(m))
    if m == 0:
        return False
    if m == 1:
        return True
    for p in map(int, primes_upto(min(_TRIAL_DIVISION_LIMIT, math.isqrt(m) + 1))):
        if p * p > m:
            break
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
    if m == 1:
        return True
    # remaining cofactor has all prime factors > 1e6
    s = math.isqrt(m)
    if s * s == m:
        return False
    if m < _TRIAL_DIVISION_LIMIT**3:
        # at most two prime factors, not a square, hence square-free
        return True
    if is_prime(m):
        return True
    rng = random.Random(m % (2**32))
    stack = [m]
    prime_factors: list[int] = []
    while stack:
        v = stack.pop()
        if is_prime(v):
            if v in prime_factors:
                return False
            prime_factors.append(v)
            continue
        sv = math.isqrt(v)
        if sv * sv == v:
            return False
        factor = _pollard_brent(v, rng, max_rho_iter)
        if factor is None:
            raise SquarefreeUnknownError(f"could not factor {v}")
        if v // factor == factor:
            return False
        stack.extend([factor, v // factor])
    return True


# ---------------------------------------------------------------------------
# Lattice counting
# ---------------------------------------------------------------------------

#: largest value range for which membership sieves are built in memory
TABLE_LIMIT = 2 * 10**8

#: int64 is safe when |f| provably stays below this
_INT64_SAFE = 2**62


@dataclass
class CountResult:
    count: int
    lattice_points: int
    P: int
    elapsed: float
    mode: str  # "prime" | "squarefree" | "joint"
    partial: bool = False
    unknown_values: int = 0


def _slab_coords(
    ranges: list[range], first_slice: slice
) -> list[np.ndarray]:
    """Broadcastable coordinate arrays for a slab of the lattice grid."""
    n = len(ranges)
    coords = []
    first = np.arange(ranges[0].start, ranges[0].stop)[first_slice]
    coords.append(first.reshape((-1,) + (1,) * (n - 1)))
    for i in range(1, n):
        axis = np.arange(ranges[i].start, ranges[i].stop)
        coords.append(axis.reshape((1,) * i + (-1,) + (1,) * (n - 1 - i)))
    return coords


def _count_slab(
    polys: list[MultiPoly],
    ranges: list[range],
    first_slice: slice,
    mode: str,
    tables: list[np.ndarray] | None,
    int64_safe: bool,
) -> tuple[int, int]:
    """(count, unknown) over one slab."""
    coords = _slab_coords(ranges, first_slice)
    if not int64_safe:
        coords = [c.astype(object) for c in coords]
    shape = np.broadcast_shapes(*(c.shape for c in coords))
    ok = np.ones(shape, dtype=bool)
    unknown = 0
    for idx, f in enumerate(polys):
        vals = f.evaluate_array(coords)
        if mode == "squarefree":
            vals = abs(vals)
        if tables is not None:
            v = vals.astype(np.int64)
            inside = (v >= 0) & (v < len(tables[idx]))
            hit = np.zeros(shape, dtype=bool)
            hit[inside] = tables[idx][v[inside]]
            ok &= hit
        else:
            uniq, inverse = np.unique(np.asarray(vals).ravel(), return_inverse=True)
            verdicts = np.zeros(len(uniq), dtype=bool)
            for j, u in enumerate(uniq):
                u = int(u)
                if mode in ("prime", "joint"):
                    verdicts[j] = u > 1 and is_prime(u)
                else:
                    try:
                        verdicts[j] = is_squarefree(u)
                    except SquarefreeUnknownError:
                        verdicts[j] = False
                        unknown += int(np.sum(inverse == j))
            ok &= verdicts[inverse].reshape(shape)
    return int(ok.sum()), unknown


def count_values(
    f: MultiPoly | Sequence[MultiPoly],
    box: Box,
    P: int,
    mode: str,
    budget: int = 10**9,
    threads: int = 1,
) -> CountResult:
    """Exact count of lattice points of P*box where f takes prime /
    square-free / jointly prime values."""
    start_time = time.perf_counter()
    polys = list(f) if isinstance(f, (list, tuple)) else [f]
    if mode not in ("prime", "squarefree", "joint"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "joint":
        if len(set(polys)) != len(polys):
            raise ValueError("joint mode requires pairwise-distinct polynomials")
    elif len(polys) != 1:
        raise ValueError(f"{mode} mode takes a single polynomial")
    n = polys[0].n_vars
    if box.n_dims != n:
        raise PolynomialError("box dimension does not match polynomial")
    ranges = box.lattice_ranges(P)
    lattice_points = 1
    for r in ranges:
        lattice_points *= max(0, len(r))
    if lattice_points == 0:
        return CountResult(0, 0, P, time.perf_counter() - start_time, mode)
    if lattice_points > budget:
        raise BudgetExceededError(
            f"{lattice_points} lattice points exceed budget {budget}"
        )

    radius = [max(abs(r.start), abs(r.stop - 1)) for r in ranges]
    bounds = [g.abs_bound(radius) for g in polys]
    int64_safe = all(b < _INT64_SAFE for b in bounds)
    tables: list[np.ndarray] | None = None
    if int64_safe and all(b + 1 <= TABLE_LIMIT for b in bounds):
        if mode in ("prime", "joint"):
            limit = max(b + 1 for b in bounds)
            table = _sieve_bools(max(limit, 3))
            tables = [table] * len(polys)
        else:
            tables = [squarefree_table(bounds[0] + 1)]

    n_first = len(ranges[0])
    n_slabs = max(1, min(threads * 4, n_first)) if threads > 1 else 1
    edges = np.linspace(0, n_first, n_slabs + 1, dtype=int)
    slabs = [slice(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if a < b]

    def work(sl: slice) -> tuple[int, int]:
        return _count_slab(polys, ranges, sl, mode, tables, int64_safe)

    if threads > 1 and len(slabs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, slabs))
    else:
        results = [work(sl) for sl in slabs]

    count = sum(r[0] for r in results)
    unknown = sum(r[1] for r in results)
    return CountResult(
        count=count,
        lattice_points=lattice_points,
        P=P,
        elapsed=time.perf_counter() - start_time,
        mode=mode,
        partial=unknown > 0,
        unknown_values=unknown,
    )
