"""Hypothesis gating and end-to-end density experiments.

`check_hypotheses` runs the convergence and geometry checks behind each
density formula; `run_experiment` gates on them (unless forced), then
compares exhaustive lattice counts against the predicted local-global
product for every P in the grid.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .counting import BudgetExceededError, count_values
from .integrals import li_f, li_joint
from .intervals import CertificationError, PositivityError, certify_above
from .localcounts import euler_product, fixed_prime_divisors
from .poly import (
    Box,
    MultiPoly,
    PolynomialError,
    SigmaEstimate,
    heuristic_irreducibility,
    parse_polynomial,
    separability_check,
    singular_dimension_estimate,
)
from .reports import (
    ExperimentReport,
    ExperimentRow,
    HypothesisCheck,
    HypothesisReport,
)

MODES = ("prime", "squarefree", "joint")

_HYPOTHESIS_NAME = {
    "prime": "theorem-1.2",
    "squarefree": "theorem-1.4",
    "joint": "conjecture-A.3",
}

_EULER_MODE = {
    "prime": "prime-density",
    "squarefree": "squarefree-density",
    "joint": "joint",
}


class ConfigError(ValueError):
    """Malformed experiment configuration."""


def _sigma_primes(n: int, budget: int = 2 * 10**6) -> list[int]:
    candidates = [3, 5, 7, 11, 13, 17]
    picked = [p for p in candidates if p**n <= budget]
    return picked[:3] if len(picked) >= 3 else picked[:1] or [3]


def _estimate_sigma(
    f: MultiPoly, sigma_override: int | None
) -> SigmaEstimate:
    if sigma_override is not None:
        return SigmaEstimate(value=int(sigma_override), method="user-supplied")
    f0 = f.top_degree_part()
    return singular_dimension_estimate(f0, _sigma_primes(f.n_vars))


def _positivity_check(name: str, f0: MultiPoly, box: Box) -> HypothesisCheck:
    try:
        certify_above(f0, box, threshold=0)
        return HypothesisCheck(name, "pass", "top-degree form certified positive on the box")
    except PositivityError as exc:
        return HypothesisCheck(name, "fail", str(exc))
    except CertificationError as exc:
        return HypothesisCheck(name, "unknown", str(exc))


def _margin_check(
    name: str, n: int, sigma: int, required: float, strict: bool
) -> HypothesisCheck:
    margin = n - sigma
    ok = margin > required if strict else margin >= required
    rel = ">" if strict else ">="
    detail = f"n - sigma = {margin}, needs {rel} {required:g}"
    return HypothesisCheck(name, "pass" if ok else "fail", detail)


def _fixed_divisor_check(f: MultiPoly) -> HypothesisCheck:
    if f.content() != 1:
        return HypothesisCheck(
            "no-fixed-prime-divisor",
            "fail",
            f"content {f.content()} > 1: every value shares a fixed factor",
        )
    divisors = fixed_prime_divisors(f)
    if divisors:
        return HypothesisCheck(
            "no-fixed-prime-divisor",
            "fail",
            f"fixed prime divisors {sorted(divisors)}: prime density vanishes",
        )
    return HypothesisCheck("no-fixed-prime-divisor", "pass", "")


def check_hypotheses(
    polys: MultiPoly | Sequence[MultiPoly],
    box: Box,
    mode: str,
    sigma_override: int | None = None,
) -> HypothesisReport:
    """Run the applicability checks for the requested density formula.

    Modes: 'prime' (irreducibility, singular-locus margin, box positivity,
    no fixed prime divisor), 'squarefree' (separability and a weaker
    margin), 'joint' (per-polynomial irreducibility plus pairwise
    coprimality, positivity, and no fixed divisor of the product).
    """
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")
    poly_list = list(polys) if isinstance(polys, (list, tuple)) else [polys]
    if not poly_list:
        raise ConfigError("at least one polynomial is required")
    n = poly_list[0].n_vars
    if box.n_dims != n:
        raise ConfigError(f"box has {box.n_dims} intervals for {n} variables")
    checks: list[HypothesisCheck] = []
    sigma: SigmaEstimate | None = None

    if mode == "prime":
        f = poly_list[0]
        d = f.degree
        sigma = _estimate_sigma(f, sigma_override)
        verdict = heuristic_irreducibility(f)
        checks.append(
            HypothesisCheck(
                "irreducible",
                "pass" if verdict == "irreducible" else
                ("fail" if verdict == "reducible" else "unknown"),
                f"verdict: {verdict}",
            )
        )
        required = max(4, (d - 1) * 2 ** (d - 1) + 1)
        checks.append(
            _margin_check("singular-locus-margin", n, sigma.value, required, strict=False)
        )
        checks.append(_positivity_check("box-positive", f.top_degree_part(), box))
        checks.append(_fixed_divisor_check(f))
    elif mode == "squarefree":
        f = poly_list[0]
        d = f.degree
        sigma = _estimate_sigma(f, sigma_override)
        verdict = separability_check(f)
        checks.append(
            HypothesisCheck(
                "separable",
                "pass" if verdict == "separable" else "fail",
                f"verdict: {verdict}",
            )
        )
        required = max(1.0, (d - 1) * 2**d / 3)
        checks.append(
            _margin_check("singular-locus-margin", n, sigma.value, required, strict=True)
        )
        checks.append(_positivity_check("box-positive", f.top_degree_part(), box))
    else:
        import sympy

        if sigma_override is not None:
            sigma = SigmaEstimate(value=int(sigma_override), method="user-supplied")
        exprs = [f.to_sympy() for f in poly_list]
        for i, f in enumerate(poly_list, start=1):
            verdict = heuristic_irreducibility(f)
            checks.append(
                HypothesisCheck(
                    f"irreducible-{i}",
                    "pass" if verdict == "irreducible" else
                    ("fail" if verdict == "reducible" else "unknown"),
                    f"verdict: {verdict}",
                )
            )
        distinct = True
        for i in range(len(exprs)):
            for j in range(i + 1, len(exprs)):
                if not sympy.gcd(exprs[i], exprs[j]).is_number:
                    distinct = False
        checks.append(
            HypothesisCheck(
                "pairwise-coprime",
                "pass" if distinct else "fail",
                "" if distinct else "two factors share a common component",
            )
        )
        for i, f in enumerate(poly_list, start=1):
            checks.append(
                _positivity_check(f"box-positive-{i}", f.top_degree_part(), box)
            )
        product = poly_list[0]
        for f in poly_list[1:]:
            product = product * f
        checks.append(_fixed_divisor_check(product))

    return HypothesisReport(
        mode=_HYPOTHESIS_NAME[mode],
        checks=checks,
        sigma_used=sigma,
    )


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------


def parse_config(config: dict) -> dict:
    """Validate the experiment config and parse its polynomial/box fields.

    Returns a dict with keys: polys, box, mode, P_grid, euler_cutoff,
    tolerances, sigma_override, force, threads, budget.
    """
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    required = ("polynomials", "box", "mode", "P_grid", "euler_cutoff")
    for key in required:
        if key not in config:
            raise ConfigError(f"missing config key {key!r}")
    mode = config["mode"]
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    box_spec = config["box"]
    if not isinstance(box_spec, list) or not box_spec:
        raise ConfigError("box must be a non-empty list of [a, b] pairs")
    try:
        box = Box(
            (Fraction(str(a)), Fraction(str(b))) for a, b in box_spec
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad box: {exc}") from exc
    n = box.n_dims
    texts = config["polynomials"]
    if not isinstance(texts, list) or not texts:
        raise ConfigError("polynomials must be a non-empty list of strings")
    if mode != "joint" and len(texts) != 1:
        raise ConfigError(f"mode {mode!r} takes exactly one polynomial")
    try:
        polys = [parse_polynomial(t, n) for t in texts]
    except PolynomialError as exc:
        raise ConfigError(f"bad polynomial: {exc}") from exc
    p_grid = config["P_grid"]
    if (
        not isinstance(p_grid, list)
        or not p_grid
        or not all(isinstance(p, int) and p >= 1 for p in p_grid)
    ):
        raise ConfigError("P_grid must be a non-empty list of positive integers")
    cutoff = config["euler_cutoff"]
    if not isinstance(cutoff, int) or cutoff < 2:
        raise ConfigError("euler_cutoff must be an integer >= 2")
    tolerances = config.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("tolerances must be an object")
    sigma_override = config.get("sigma_override")
    if sigma_override is not None and not isinstance(sigma_override, int):
        raise ConfigError("sigma_override must be an integer")
    threads = config.get("threads", 1)
    if not isinstance(threads, int) or threads < 1:
        raise ConfigError("threads must be a positive integer")
    budget = config.get("budget", 10**9)
    return {
        "polys": polys,
        "box": box,
        "mode": mode,
        "P_grid": list(p_grid),
        "euler_cutoff": cutoff,
        "tolerances": dict(tolerances),
        "sigma_override": sigma_override,
        "force": bool(config.get("force", False)),
        "threads": threads,
        "budget": int(budget),
    }


def run_experiment(config: dict) -> ExperimentReport:
    """Full pipeline: hypothesis gate, singular series, lattice counts.

    Budget failures abort individual rows (recorded in ``row_errors`` and
    flagged ``partial``), never the whole run.  A failing hypothesis gate
    yields a report with no rows unless ``force`` is set.
    """
    start = time.monotonic()
    cfg = parse_config(config)
    polys = cfg["polys"]
    box = cfg["box"]
    mode = cfg["mode"]
    f = polys[0]

    hypothesis = check_hypotheses(polys, box, mode, cfg["sigma_override"])
    report = ExperimentReport(
        mode=mode,
        rows=[],
        hypothesis=hypothesis,
        config=dict(config),
        metadata={
            "package_version": __version__,
            "numpy_version": np.__version__,
            "threads": cfg["threads"],
        },
    )
    if not hypothesis.all_passed and not cfg["force"]:
        report.metadata["gated"] = True
        report.metadata["elapsed"] = time.monotonic() - start
        return report
    report.heuristic = not hypothesis.all_passed

    try:
        euler = euler_product(
            polys if mode == "joint" else f,
            _EULER_MODE[mode],
            cutoff=cfg["euler_cutoff"],
            sigma=hypothesis.sigma_used,
            budget=cfg["budget"],
            force=cfg["force"],
        )
    except BudgetExceededError as exc:
        report.partial = True
        report.row_errors.append(f"euler product: {exc}")
        report.metadata["elapsed"] = time.monotonic() - start
        return report
    report.heuristic = report.heuristic or euler.heuristic
    li_tol = float(cfg["tolerances"].get("li_tol", 1e-8))

    for P in cfg["P_grid"]:
        try:
            counted = count_values(
                polys if mode == "joint" else f,
                box,
                P,
                mode=mode,
                budget=cfg["budget"],
                threads=cfg["threads"],
            )
            if mode == "prime":
                li = li_f(f, box, P, tol=li_tol)
                li_value, li_error = li.value, li.abs_error_estimate
            elif mode == "joint":
                li = li_joint(polys, box, P, tol=li_tol)
                li_value, li_error = li.value, li.abs_error_estimate
            else:
                # square-free density is per lattice point, not per log
                li_value, li_error = float(counted.lattice_points), 0.0
            predicted = euler.value * li_value
            ratio = counted.count / predicted if predicted else math.inf
            report.rows.append(
                ExperimentRow(
                    P=P,
                    lattice_points=counted.lattice_points,
                    empirical=counted.count,
                    predicted=predicted,
                    ratio=ratio,
                    euler_value=euler.value,
                    euler_tail=euler.tail_bound,
                    li_value=li_value,
                    li_error=li_error,
                )
            )
        except BudgetExceededError as exc:
            report.partial = True
            report.row_errors.append(f"P={P}: {exc}")
    report.metadata["elapsed"] = time.monotonic() - start
    return report
