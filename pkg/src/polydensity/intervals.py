"""Exact interval arithmetic for certifying polynomial ranges over boxes.

Endpoints are Fractions, so the enclosures are rigorous without any
rounding-mode machinery.  Used to certify box positivity of the top-degree
form (a hypothesis of the density theorems) and to bound value ranges for
the fast integer paths.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Box, MultiPoly


class PositivityError(ValueError):
    """The required sign condition provably fails on the box."""


class CertificationError(RuntimeError):
    """Bisection budget exhausted before the condition could be certified."""


def _interval_pow(a: Fraction, b: Fraction, e: int) -> tuple[Fraction, Fraction]:
    if e == 0:
        return Fraction(1), Fraction(1)
    if e % 2 == 1 or a >= 0:
        return a**e, b**e
    if b <= 0:
        return b**e, a**e
    return Fraction(0), max(a**e, b**e)


def interval_eval(f: MultiPoly, intervals) -> tuple[Fraction, Fraction]:
    """Enclosure [lo, hi] of f over the product of the given intervals."""
    lo_total = Fraction(0)
    hi_total = Fraction(0)
    for exps, coeff in f.terms.items():
        lo, hi = Fraction(1), Fraction(1)
        for (a, b), e in zip(intervals, exps):
            pl, ph = _interval_pow(Fraction(a), Fraction(b), e)
            candidates = (lo * pl, lo * ph, hi * pl, hi * ph)
            lo, hi = min(candidates), max(candidates)
        if coeff >= 0:
            lo_total += coeff * lo
            hi_total += coeff * hi
        else:
            lo_total += coeff * hi
            hi_total += coeff * lo
    return lo_total, hi_total


def _split(intervals) -> tuple[list, list]:
    widths = [b - a for a, b in intervals]
    axis = widths.index(max(widths))
    a, b = intervals[axis]
    mid = (a + b) / 2
    left = list(intervals)
    right = list(intervals)
    left[axis] = (a, mid)
    right[axis] = (mid, b)
    return left, right


def certify_above(
    f: MultiPoly, box: Box, threshold=0, max_boxes: int = 20000
) -> bool:
    """Certify f > threshold everywhere on the box by recursive bisection.

    Raises PositivityError if f provably drops to threshold or below
    somewhere, CertificationError if the bisection budget runs out first.
    """
    threshold = Fraction(threshold)
    # quick refutation at the midpoint (exact rational evaluation)
    val = _eval_rational(f, box.midpoint())
    if val <= threshold:
        raise PositivityError(
            f"f = {val} <= {threshold} at the box midpoint"
        )
    stack = [tuple(box.intervals)]
    processed = 0
    while stack:
        intervals = stack.pop()
        processed += 1
        if processed > max_boxes:
            raise CertificationError(
                "bisection budget exhausted; condition not certified"
            )
        lo, hi = interval_eval(f, intervals)
        if lo > threshold:
            continue
        if hi <= threshold:
            raise PositivityError(
                f"f <= {threshold} on a sub-box (enclosure [{lo}, {hi}])"
            )
        mids = [(a + b) / 2 for a, b in intervals]
        if _eval_rational(f, mids) <= threshold:
            raise PositivityError(
                f"f <= {threshold} at a sample point"
            )
        left, right = _split(intervals)
        stack.append(left)
        stack.append(right)
    return True


def _eval_rational(f: MultiPoly, point) -> Fraction:
    total = Fraction(0)
    for exps, coeff in f.terms.items():
        term = Fraction(coeff)
        for x, e in zip(point, exps):
            if e:
                term *= Fraction(x) ** e
        total += term
    return total


def value_range(
    f: MultiPoly, box: Box, refinements: int = 200
) -> tuple[Fraction, Fraction]:
    """Outer bounds (lo, hi) with lo <= min f(box) and hi >= max f(box).

    Bisection tightens the enclosure; inner bounds from corner samples stop
    the refinement once the outer and inner bounds are close.
    """
    boxes = [tuple(box.intervals)]
    for _ in range(refinements):
        enclosures = [interval_eval(f, iv) for iv in boxes]
        lo = min(e[0] for e in enclosures)
        hi = max(e[1] for e in enclosures)
        samples = [_eval_rational(f, [(a + b) / 2 for a, b in iv]) for iv in boxes]
        inner_lo = min(samples)
        inner_hi = max(samples)
        slack = max(inner_lo - lo, hi - inner_hi)
        spread = max(hi - lo, Fraction(1))
        if slack <= spread / 256 or len(boxes) > 512:
            break
        # refine the boxes responsible for the current outer bounds
        worst_lo = min(range(len(boxes)), key=lambda i: enclosures[i][0])
        worst_hi = max(range(len(boxes)), key=lambda i: enclosures[i][1])
        new_boxes = []
        for i, iv in enumerate(boxes):
            if i in (worst_lo, worst_hi):
                left, right = _split(iv)
                new_boxes.extend([tuple(left), tuple(right)])
            else:
                new_boxes.append(iv)
        boxes = new_boxes
    enclosures = [interval_eval(f, iv) for iv in boxes]
    return (
        min(e[0] for e in enclosures),
        max(e[1] for e in enclosures),
    )
