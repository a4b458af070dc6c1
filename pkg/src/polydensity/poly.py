"""Sparse multivariate integer polynomials, boxes, and structural analysis.

Polynomials are stored as a map from exponent vectors to nonzero integer
coefficients.  Coefficients are Python ints, so all arithmetic is exact and
unbounded.  The zero polynomial is rejected at construction: every analysis
routine downstream (top-degree part, local counting, density prediction)
assumes a nonzero polynomial.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
import sympy


class PolynomialError(ValueError):
    """Invalid polynomial input or operation."""


class ParseError(PolynomialError):
    """Syntax error in a polynomial expression, with a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class MultiPoly:
    """Nonzero sparse polynomial in ``n_vars`` variables over the integers.

    ``terms`` maps exponent tuples (length ``n_vars``) to nonzero integer
    coefficients.  Instances are immutable and hashable.
    """

    __slots__ = ("n_vars", "_terms", "_hash")

    def __init__(self, n_vars: int, terms: Mapping[tuple[int, ...], int]):
        if n_vars < 1:
            raise PolynomialError("n_vars must be positive")
        clean: dict[tuple[int, ...], int] = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n_vars:
                raise PolynomialError(
                    f"exponent vector {exps} has length {len(exps)}, expected {n_vars}"
                )
            if any(e < 0 for e in exps):
                raise PolynomialError(f"negative exponent in {exps}")
            coeff = int(coeff)
            if coeff != 0:
                clean[exps] = coeff
        if not clean:
            raise PolynomialError("the zero polynomial is not allowed")
        object.__setattr__(self, "n_vars", n_vars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(
            self, "_hash", hash((n_vars, tuple(sorted(clean.items()))))
        )

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max(sum(e) for e in self._terms)

    def is_constant(self) -> bool:
        return self.degree == 0

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self._terms}
        return len(degs) == 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.n_vars == other.n_vars
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({self.n_vars}, {self.to_string()!r})"

    # -- arithmetic (used by the parser and the analysis routines) --

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        return _from_dict(self.n_vars, _add(self._terms, other._terms))

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return _from_dict(self.n_vars, _add(self._terms, _neg(other._terms)))

    def __neg__(self) -> "MultiPoly":
        return _from_dict(self.n_vars, _neg(self._terms))

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        return _from_dict(self.n_vars, _mul(self._terms, other._terms))

    def scale(self, c: int) -> "MultiPoly":
        if c == 0:
            raise PolynomialError("scaling by zero gives the zero polynomial")
        return _from_dict(self.n_vars, {e: c * v for e, v in self._terms.items()})

    # -- evaluation --

    def evaluate_int(self, point: Sequence[int]) -> int:
        """Exact value at an integer point."""
        if len(point) != self.n_vars:
            raise PolynomialError(
                f"point has {len(point)} coordinates, expected {self.n_vars}"
            )
        total = 0
        for exps, coeff in self._terms.items():
            prod = coeff
            for x, e in zip(point, exps):
                if e:
                    prod *= int(x) ** e
            total += prod
        return total

    def evaluate_mod(self, point: Sequence[int], modulus: int) -> int:
        total = 0
        for exps, coeff in self._terms.items():
            prod = coeff % modulus
            for x, e in zip(point, exps):
                if e:
                    prod = (prod * pow(int(x), e, modulus)) % modulus
            total = (total + prod) % modulus
        return total

    def evaluate_array(
        self, coords: Sequence[np.ndarray], modulus: int | None = None
    ) -> np.ndarray:
        """Vectorised evaluation over broadcastable coordinate arrays.

        With ``modulus`` set, every intermediate stays below ``modulus**2``,
        so int64 is safe whenever ``modulus < 2**31``.  Without a modulus the
        caller is responsible for certifying that int64 cannot overflow (see
        :meth:`abs_bound`); pass object-dtype arrays otherwise.
        """
        if len(coords) != self.n_vars:
            raise PolynomialError("coordinate arrays do not match n_vars")
        shape = np.broadcast_shapes(*(np.shape(c) for c in coords))
        if modulus is not None:
            total = np.zeros(shape, dtype=np.int64)
            for exps, coeff in self._terms.items():
                prod = np.full(shape, coeff % modulus, dtype=np.int64)
                for x, e in zip(coords, exps):
                    if e:
                        xe = _pow_mod_array(x, e, modulus)
                        prod = (prod * xe) % modulus
                total = (total + prod) % modulus
            return total
        total = np.zeros(shape, dtype=coords[0].dtype if coords else np.int64)
        for exps, coeff in self._terms.items():
            prod = np.full(shape, coeff, dtype=total.dtype)
            for x, e in zip(coords, exps):
                if e:
                    prod = prod * (x ** e)
            total = total + prod
        return total

    def abs_bound(self, radius: Sequence[float]) -> int:
        """Upper bound for |f(x)| when |x_i| <= radius[i]."""
        bound = 0
        for exps, coeff in self._terms.items():
            term = abs(coeff)
            for r, e in zip(radius, exps):
                term *= int(math.ceil(abs(r))) ** e
            bound += term
        return bound

    # -- structure --

    def top_degree_part(self) -> "MultiPoly":
        """Homogeneous part of maximal total degree (``f_0``)."""
        d = self.degree
        return _from_dict(
            self.n_vars, {e: c for e, c in self._terms.items() if sum(e) == d}
        )

    def content(self) -> int:
        """gcd of all coefficients, as a positive integer."""
        return math.gcd(*(abs(c) for c in self._terms.values()))

    def primitive_part(self) -> "MultiPoly":
        c = self.content()
        return self if c == 1 else _from_dict(
            self.n_vars, {e: v // c for e, v in self._terms.items()}
        )

    def partial(self, i: int) -> "MultiPoly | None":
        """Partial derivative with respect to variable ``i`` (None if zero)."""
        out: dict[tuple[int, ...], int] = {}
        for exps, coeff in self._terms.items():
            if exps[i] == 0:
                continue
            new = list(exps)
            new[i] -= 1
            key = tuple(new)
            out[key] = out.get(key, 0) + coeff * exps[i]
        out = {e: c for e, c in out.items() if c != 0}
        return _from_dict(self.n_vars, out) if out else None

    def gradient(self) -> list["MultiPoly | None"]:
        return [self.partial(i) for i in range(self.n_vars)]

    # -- text and JSON --

    def to_string(self) -> str:
        parts = []
        for exps, coeff in sorted(
            self._terms.items(), key=lambda t: (-sum(t[0]), t[0])
        ):
            monos = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exps)
                if e
            ]
            body = "*".join(monos)
            if not body:
                piece = str(coeff)
            elif coeff == 1:
                piece = body
            elif coeff == -1:
                piece = f"-{body}"
            else:
                piece = f"{coeff}*{body}"
            if parts and not piece.startswith("-"):
                parts.append("+")
            parts.append(piece)
        return "".join(parts)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n_vars,
                "terms": [
                    {"e": list(e), "c": str(c)}
                    for e, c in sorted(self._terms.items())
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MultiPoly":
        doc = json.loads(text)
        return cls(
            doc["n"], {tuple(t["e"]): int(t["c"]) for t in doc["terms"]}
        )

    def to_sympy(self) -> sympy.Expr:
        xs = sympy.symbols(f"x1:{self.n_vars + 1}")
        if self.n_vars == 1:
            xs = (xs[0],) if isinstance(xs, tuple) else (xs,)
        expr = sympy.Integer(0)
        for exps, coeff in self._terms.items():
            term = sympy.Integer(coeff)
            for x, e in zip(xs, exps):
                term *= x ** e
            expr += term
        return expr


def _from_dict(n_vars: int, terms: Mapping[tuple[int, ...], int]) -> MultiPoly:
    return MultiPoly(n_vars, terms)


def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c != 0}


def _neg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def _mul(a: dict, b: dict) -> dict:
    out: dict[tuple[int, ...], int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def _pow_mod_array(x: np.ndarray, e: int, modulus: int) -> np.ndarray:
    """x**e mod modulus by square-and-multiply; intermediates < modulus**2."""
    result = np.ones_like(x)
    base = np.mod(x, modulus)
    while e:
        if e & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Expression parser
# ---------------------------------------------------------------------------
#
# Grammar (EBNF; ^ binds tightest, +/-/* left-associative, unary minus allowed):
#
#   expr    = term { ("+" | "-") term } ;
#   term    = factor { "*" factor | power } ;      (* juxtaposition multiplies *)
#   factor  = "-" factor | power ;
#   power   = atom [ "^" integer ] ;
#   atom    = integer | variable | "(" expr ")" ;
#   variable = "x" integer          (* x1 ... x{n_vars} *)


class _Parser:
    def __init__(self, text: str, n_vars: int):
        self.text = text
        self.n_vars = n_vars
        self.pos = 0

    def parse(self) -> dict[tuple[int, ...], int]:
        result = self._expr()
        self._skip_ws()
        if self.pos < len(self.text):
            raise ParseError(
                f"unexpected character {self.text[self.pos]!r}", self.pos
            )
        return result

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self) -> dict:
        acc = self._term()
        while True:
            ch = self._peek()
            if ch == "+":
                self.pos += 1
                acc = _add(acc, self._term())
            elif ch in ("-", "−"):
                self.pos += 1
                acc = _add(acc, _neg(self._term()))
            else:
                return acc

    def _term(self) -> dict:
        acc = self._factor()
        while True:
            ch = self._peek()
            if ch in ("*", "·"):
                self.pos += 1
                acc = _mul(acc, self._factor())
            elif ch == "(" or ch == "x" or ch.isdigit():
                # juxtaposition, e.g. "3x1^2" or "x1(x1+2)"
                acc = _mul(acc, self._power())
            else:
                return acc

    def _factor(self) -> dict:
        if self._peek() in ("-", "−"):
            self.pos += 1
            return _neg(self._factor())
        return self._power()

    def _power(self) -> dict:
        base = self._atom()
        if self._peek() == "^":
            self.pos += 1
            start = self.pos
            self._skip_ws()
            if self._peek() in ("-", "−"):
                raise ParseError("negative exponent", self.pos)
            e = self._integer("exponent")
            if e < 0:
                raise ParseError("negative exponent", start)
            return _pow_dict(base, e, self.n_vars)
        return base

    def _atom(self) -> dict:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            inner = self._expr()
            if self._peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return inner
        if ch == "x":
            start = self.pos
            self.pos += 1
            idx = self._integer("variable index", allow_missing=False)
            if not 1 <= idx <= self.n_vars:
                raise ParseError(
                    f"unknown variable x{idx} (n_vars={self.n_vars})", start
                )
            exps = [0] * self.n_vars
            exps[idx - 1] = 1
            return {tuple(exps): 1}
        if ch.isdigit():
            value = self._integer("integer literal")
            if value == 0:
                return {}
            return {(0,) * self.n_vars: value}
        raise ParseError(
            f"unexpected character {ch!r}" if ch else "unexpected end of input",
            self.pos,
        )

    def _integer(self, what: str, allow_missing: bool = True) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError(f"expected {what}", start)
        return int(self.text[start : self.pos])


def _pow_dict(base: dict, e: int, n_vars: int) -> dict:
    acc = {(0,) * n_vars: 1}
    for _ in range(e):
        acc = _mul(acc, base)
    return acc


def parse_polynomial(text: str, n_vars: int) -> MultiPoly:
    """Parse an expression in variables x1..x{n_vars} into canonical form.

    Raises :class:`ParseError` with a character position on bad syntax, and
    :class:`PolynomialError` if the expression simplifies to zero.
    """
    terms = _Parser(text, n_vars).parse()
    if not terms:
        raise PolynomialError("expression simplifies to the zero polynomial")
    return MultiPoly(n_vars, terms)


# ---------------------------------------------------------------------------
# Boxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Axis-aligned box with rational endpoints, one closed interval per axis."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, intervals: Iterable[tuple]):
        ivs = tuple(
            (Fraction(a), Fraction(b)) for a, b in intervals
        )
        if not ivs:
            raise PolynomialError("a box needs at least one interval")
        for a, b in ivs:
            if a > b:
                raise PolynomialError(f"interval [{a}, {b}] has a > b")
        object.__setattr__(self, "intervals", ivs)

    @property
    def n_dims(self) -> int:
        return len(self.intervals)

    @property
    def volume(self) -> Fraction:
        v = Fraction(1)
        for a, b in self.intervals:
            v *= b - a
        return v

    def scaled(self, p) -> "Box":
        """The box ``P * B`` (every endpoint multiplied by ``p > 0``)."""
        p = Fraction(p)
        if p <= 0:
            raise ValueError("scale factor must be positive")
        return Box([(a * p, b * p) for a, b in self.intervals])

    def lattice_ranges(self, p: int) -> list[range]:
        """Integer ranges of ``Z^n`` intersected with ``p * B`` per axis."""
        out = []
        for a, b in self.intervals:
            lo = math.ceil(a * p)
            hi = math.floor(b * p)
            out.append(range(lo, hi + 1))
        return out

    def lattice_point_count(self, p: int) -> int:
        count = 1
        for r in self.lattice_ranges(p):
            count *= max(0, len(r))
        return count

    def midpoint(self) -> list[Fraction]:
        return [(a + b) / 2 for a, b in self.intervals]


# ---------------------------------------------------------------------------
# Singular-locus dimension estimate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaEstimate:
    """Estimated (or user-supplied) dimension of the singular locus of f_0.

    ``value`` is the dimension of the affine variety grad(f_0) = 0; by
    convention an empty locus has value 0.  ``method`` records whether the
    number was supplied by the user or majority-voted from mod-p point counts.
    """

    value: int
    method: str  # "user-supplied" | "mod-p-estimated"
    witness_primes: tuple[int, ...] = ()
    per_prime: tuple[tuple[int, int], ...] = ()  # (p, estimate) pairs
    agreement: bool = True


def singular_dimension_estimate(
    f0: MultiPoly, primes: Sequence[int], budget: int = 10**8
) -> SigmaEstimate:
    """Estimate sigma_f by counting common zeros of grad(f_0) over F_p.

    For an affine cone of dimension s the count N_p grows like p^s, so
    round(log N_p / log p) recovers s; disagreeing primes are reported and
    the majority wins (ties go to the larger, i.e. more cautious, value).
    """
    if not f0.is_homogeneous():
        raise PolynomialError("sigma estimate requires a homogeneous polynomial")
    if not primes:
        raise PolynomialError("empty prime list")
    grad = f0.gradient()
    if all(g is None for g in grad):
        raise PolynomialError("gradient vanishes identically")
    n = f0.n_vars
    per_prime: list[tuple[int, int]] = []
    for p in primes:
        if p ** n > budget:
            raise PolynomialError(f"budget exceeded: {p}^{n} > {budget}")
        count = _count_gradient_zeros(grad, p, n)
        if count == 0:
            est = 0
        else:
            est = int(round(math.log(count) / math.log(p)))
        per_prime.append((int(p), est))
    values = [v for _, v in per_prime]
    majority = max(sorted(set(values)), key=lambda v: (values.count(v), v))
    return SigmaEstimate(
        value=majority,
        method="mod-p-estimated",
        witness_primes=tuple(int(p) for p in primes),
        per_prime=tuple(per_prime),
        agreement=len(set(values)) == 1,
    )


def _count_gradient_zeros(grad: list, p: int, n: int) -> int:
    axes = [
        np.arange(p, dtype=np.int64).reshape((1,) * i + (p,) + (1,) * (n - 1 - i))
        for i in range(n)
    ]
    mask = np.ones((p,) * n, dtype=bool)
    for g in grad:
        if g is None:
            continue
        vals = g.evaluate_array(
            [np.broadcast_to(a, (p,) * n) for a in axes], modulus=p
        )
        mask &= vals == 0
    return int(mask.sum())


# ---------------------------------------------------------------------------
# Separability and irreducibility
# ---------------------------------------------------------------------------


def separability_check(f: MultiPoly) -> str:
    """'separable' iff gcd(f, all partials) over Q is constant."""
    if f.is_constant():
        raise PolynomialError("constant polynomial has no separability verdict")
    expr = f.primitive_part().to_sympy()
    xs = sorted(expr.free_symbols, key=lambda s: s.name)
    g = expr
    for x in xs:
        g = sympy.gcd(g, sympy.diff(expr, x))
    return "separable" if g.is_number else "not-separable"


def heuristic_irreducibility(f: MultiPoly, primes: Sequence[int] = (2, 3, 5, 7)) -> str:
    """Verdict in {'irreducible', 'reducible', 'unknown'}.

    Univariate: f mod p irreducible with full degree for some listed p is a
    sufficient condition.  Multivariate: falls back to exact factorisation
    over the rationals (finite-field multivariate factorisation is not
    available), which settles the verdict either way.
    """
    if f.is_constant():
        raise PolynomialError("constant polynomial has no irreducibility verdict")
    g = f.primitive_part()
    expr = g.to_sympy()
    xs = sympy.symbols(f"x1:{f.n_vars + 1}")
    if f.n_vars == 1:
        d = g.degree
        for p in primes:
            try:
                _, factors = sympy.factor_list(expr, xs[0], modulus=p)
            except (sympy.PolynomialError, NotImplementedError):
                continue
            nontrivial = [
                (base, mult)
                for base, mult in factors
                if sympy.degree(base, xs[0]) > 0
            ]
            total_deg = sum(
                sympy.degree(base, xs[0]) * mult for base, mult in nontrivial
            )
            if total_deg == d and len(nontrivial) == 1 and nontrivial[0][1] == 1:
                return "irreducible"
    try:
        _, factors = sympy.factor_list(expr, *xs)
    except (sympy.PolynomialError, NotImplementedError):
        return "unknown"
    nontrivial = [(b, m) for b, m in factors if not b.is_number]
    if len(nontrivial) == 1 and nontrivial[0][1] == 1:
        # exact over Q, hence certainly irreducible
        return "irreducible"
    if sum(m for _, m in nontrivial) > 1:
        return "reducible"
    return "unknown"
