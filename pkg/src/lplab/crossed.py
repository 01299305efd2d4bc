"""Desk-scale checks that the translation crossed product is a matrix algebra.

The units a_{x,y} of the regular covariant representation on the pairs
space satisfy the matrix-unit relations exactly (integer arithmetic), every
unit is a spatial partial isometry, and the represented operator of a
coefficient matrix C has the same p->p norm as C itself acting on l^p_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError
from .operators import CROSSED_MAX_ORDER, crossed_operator, crossed_unit_int
from .pnorm import EstimatorConfig, estimate_pnorm, exact_norm
from .reporting import CheckReport

SPATIAL_EXPONENTS = (1.5, 3.0)


@dataclass(eq=False)
class CrossedCoefficients:
    group: FiniteGroup
    c: np.ndarray

    def __post_init__(self) -> None:
        self.c = np.asarray(self.c, dtype=np.complex128)
        n = self.group.order
        if self.c.shape != (n, n):
            raise ValueError("coefficient matrix must be |G| x |G|")
        if not (np.all(np.isfinite(self.c.real)) and np.all(np.isfinite(self.c.imag))):
            raise ValueError("coefficient matrix must be finite")


def _check_cap(group: FiniteGroup) -> None:
    if group.order > CROSSED_MAX_ORDER:
        raise GroupError(f"crossed-product cap is order {CROSSED_MAX_ORDER}")


def _all_units(group: FiniteGroup) -> list[list[np.ndarray]]:
    n = group.order
    return [[crossed_unit_int(group, x, y).astype(np.int8) for y in range(n)]
            for x in range(n)]


def verify_matrix_units(group: FiniteGroup) -> CheckReport:
    """Exhaustive unit relations over all quadruples, in exact integer
    arithmetic: a_{x,y} a_{y,z} = a_{x,z}, a_{x,y} a_{z,w} = 0 for z != y,
    and the diagonal units sum to the identity."""
    _check_cap(group)
    n = group.order
    units = _all_units(group)
    failures = 0
    checked = 0
    zero = np.zeros((n * n, n * n), dtype=np.int8)
    for x in range(n):
        for y in range(n):
            left = units[x][y]
            for z in range(n):
                for w in range(n):
                    prod = left @ units[z][w]
                    expected = units[x][w] if z == y else zero
                    checked += 1
                    if not np.array_equal(prod, expected):
                        failures += 1
    diag_sum = sum(units[x][x].astype(np.int64) for x in range(n))
    if not np.array_equal(diag_sum, np.eye(n * n, dtype=np.int64)):
        failures += 1
    details = [{"group": group.name, "quadruples": checked, "failures": failures}]
    return CheckReport(name="crossed-matrix-units", worst_violation=float(failures),
                       tolerance=0.0, details=details)


def verify_spatiality(group: FiniteGroup, cfg: EstimatorConfig | None = None) -> CheckReport:
    """Every unit is 0/1 with at most one entry per row and column, and has
    p->p norm one: exactly at p in {1, inf}, to 1e-12 at p = 2, and to 1e-8
    by the estimator at p in {1.5, 3}."""
    _check_cap(group)
    n = group.order
    worst = 0.0
    norm_details = []
    for x in range(n):
        for y in range(n):
            unit = crossed_unit_int(group, x, y)
            if not np.all((unit == 0) | (unit == 1)):
                worst = math.inf
            if int(unit.sum(axis=0).max()) > 1 or int(unit.sum(axis=1).max()) > 1:
                worst = math.inf
            entries = unit.astype(np.complex128)
            exact_gap = max(abs(exact_norm(entries, 1) - 1.0),
                            abs(exact_norm(entries, math.inf) - 1.0))
            if exact_gap != 0.0:
                worst = math.inf
            gap2 = abs(exact_norm(entries, 2) - 1.0)
            worst = max(worst, 1e-8 * (gap2 / 1e-12))
            for p in SPATIAL_EXPONENTS:
                gap = abs(estimate_pnorm(entries, p, cfg).lower - 1.0)
                worst = max(worst, gap)
                norm_details.append({"x": x, "y": y, "p": p, "norm_gap": gap})
    details = [{"group": group.name, "units": n * n,
                "worst_norm_gap": max((d["norm_gap"] for d in norm_details), default=0.0)}]
    return CheckReport(name="crossed-spatiality", worst_violation=worst,
                       tolerance=1e-8, details=details)


def check_mnp_isometry(coeffs: CrossedCoefficients, p: float,
                       cfg: EstimatorConfig | None = None,
                       tol: float = 1e-6) -> CheckReport:
    """p->p norm of the represented operator against the coefficient matrix
    acting on l^p_n; the two agree for the translation crossed product."""
    _check_cap(coeffs.group)
    if not 1.0 <= p < math.inf:
        raise ValueError(f"exponent must lie in [1, inf), got {p}")
    rep = crossed_operator(coeffs.group, coeffs.c)
    n_rep = estimate_pnorm(rep, p, cfg).lower
    n_coeff = estimate_pnorm(coeffs.c, p, cfg).lower
    worst = abs(n_rep - n_coeff) / max(max(n_rep, n_coeff), 1e-300)
    details = [{"group": coeffs.group.name, "p": p,
                "norm_represented": n_rep, "norm_coefficients": n_coeff}]
    return CheckReport(name="crossed-norm-isometry", worst_violation=worst,
                       tolerance=tol, details=details)
