"""Norm curves over the Hoelder-exponent grid and the inequality checks:
monotonicity on both sides of 2, log-convexity in 1/p, duality under the
coefficient involution, abelian self-duality, subgroup isometry, quotient
contraction, and the search for non-abelian duality gaps.

All comparisons use estimator lower bounds on both sides with a relative
tolerance, so one-sided certificates cannot produce false failures.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .algebra import (AlgebraError, GroupAlgebraElement, convolve, embed_subgroup, l1_norm,
                      push_quotient, restrict_subgroup, sharp)
from .groups import FiniteGroup, GroupError, SubgroupHandle, quotient
from .operators import (coset_averaging_map, coset_block_structure, quotient_compression,
                        regular_matrix)
from .pnorm import (EstimatorConfig, PNormEstimate, conjugate_exponent, estimate_pnorm,
                    quick_norm_lower)
from .reporting import CheckReport

DEFAULT_GRID: tuple[float, ...] = (1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0)
DEFAULT_TOL = 1e-6
MAX_EXPONENT = 64.0


@dataclass(eq=False)
class NormCurve:
    group_spec: str
    f: GroupAlgebraElement
    grid: tuple[float, ...]
    points: list[PNormEstimate]

    def value(self, p: float) -> float:
        return self.points[self.grid.index(p)].lower

    def to_json(self) -> dict[str, Any]:
        return {
            "group": self.group_spec,
            "grid": [float(p) for p in self.grid],
            "points": [pt.to_json() for pt in self.points],
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["p", "lower", "upper", "converged"])
        for p, pt in zip(self.grid, self.points):
            writer.writerow([repr(float(p)), repr(pt.lower), repr(pt.upper),
                             str(pt.converged).lower()])
        return out.getvalue()


def norm_curve(f: GroupAlgebraElement, grid=DEFAULT_GRID,
               cfg: EstimatorConfig | None = None) -> NormCurve:
    grid = tuple(float(p) for p in grid)
    if any(not 1.0 <= p <= MAX_EXPONENT for p in grid):
        raise ValueError(f"grid exponents must lie in [1, {MAX_EXPONENT}]")
    if list(grid) != sorted(set(grid)):
        raise ValueError("grid must be strictly increasing")
    m = regular_matrix(f)
    points = [estimate_pnorm(m, p, cfg) for p in grid]
    return NormCurve(group_spec=f.group.name, f=f, grid=grid, points=points)


def check_herz_monotone(curve: NormCurve, tol: float = DEFAULT_TOL) -> CheckReport:
    """Nonincreasing up to p = 2 and nondecreasing after it."""
    worst = 0.0
    details = []
    grid, vals = curve.grid, [pt.lower for pt in curve.points]
    for i, p_lo in enumerate(grid):
        for j in range(i + 1, len(grid)):
            p_hi = grid[j]
            if p_hi <= 2.0:        # curve must not increase: v(hi) <= v(lo)
                gap = (vals[j] - vals[i]) / max(vals[i], 1e-300)
            elif p_lo >= 2.0:      # curve must not decrease: v(lo) <= v(hi)
                gap = (vals[i] - vals[j]) / max(vals[j], 1e-300)
            else:
                continue
            if gap > worst:
                worst = gap
                details.append({"p_low": p_lo, "p_high": p_hi, "violation": gap})
    return CheckReport(name="herz-monotone", worst_violation=worst, tolerance=tol,
                       details=details[-3:])


def check_log_convexity(curve: NormCurve, tol: float = DEFAULT_TOL) -> CheckReport:
    """Convexity of log ||lambda_p(f)|| as a function of 1/p, by triples."""
    grid, vals = curve.grid, [pt.lower for pt in curve.points]
    if len(grid) < 3:
        raise ValueError("log-convexity needs at least three grid points")
    if any(v <= 0.0 for v in vals):
        raise ValueError("log-convexity undefined for zero curve values")
    worst = -math.inf
    details = []
    for i in range(len(grid) - 2):
        p0, p1, p2 = grid[i], grid[i + 1], grid[i + 2]
        theta = (1 / p0 - 1 / p1) / (1 / p0 - 1 / p2)
        bound = (1 - theta) * math.log(vals[i]) + theta * math.log(vals[i + 2])
        slack = math.log(vals[i + 1]) - bound
        if slack > worst:
            worst = slack
            details.append({"p0": p0, "p1": p1, "p2": p2, "log_excess": slack})
    return CheckReport(name="log-convexity", worst_violation=worst, tolerance=tol,
                       details=details[-3:])


def check_sharp_duality(f: GroupAlgebraElement, p: float,
                        cfg: EstimatorConfig | None = None,
                        tol: float = DEFAULT_TOL) -> CheckReport:
    """||conv by f-sharp||_p against ||conv by f||_{p'}, plus the exact
    transpose identity between the two matrices."""
    if not 1.0 < p < math.inf:
        raise ValueError(f"duality check requires p in (1, inf), got {p}")
    pp = conjugate_exponent(p)
    m_f = regular_matrix(f)
    m_sharp = regular_matrix(sharp(f))
    transpose_exact = bool(np.array_equal(m_sharp.entries, m_f.entries.T))
    n_sharp = estimate_pnorm(m_sharp, p, cfg).lower
    n_dualexp = estimate_pnorm(m_f, pp, cfg).lower
    worst = abs(n_sharp - n_dualexp) / max(max(n_sharp, n_dualexp), 1.0)
    if not transpose_exact:
        worst = math.inf
    details = [{"p": p, "p_conj": pp, "n_p_sharp": n_sharp, "n_pconj": n_dualexp,
                "transpose_exact": transpose_exact}]
    return CheckReport(name="sharp-duality", worst_violation=worst, tolerance=tol,
                       details=details)


def _require_abelian(group: FiniteGroup) -> None:
    if group.abelian_structure is None and not group.is_commutative:
        raise GroupError(f"group {group.name} is not abelian")


def check_abelian_selfduality(f: GroupAlgebraElement, p: float,
                              cfg: EstimatorConfig | None = None,
                              tol: float = DEFAULT_TOL) -> CheckReport:
    """||conv by f||_p = ||conv by f||_{p'} without the involution; this
    version of duality holds only for commutative groups."""
    _require_abelian(f.group)
    if not 1.0 < p < math.inf:
        raise ValueError(f"self-duality check requires p in (1, inf), got {p}")
    pp = conjugate_exponent(p)
    m = regular_matrix(f)
    n_p = estimate_pnorm(m, p, cfg).lower
    n_pp = estimate_pnorm(m, pp, cfg).lower
    worst = abs(n_p - n_pp) / max(max(n_p, n_pp), 1.0)
    details = [{"p": p, "p_conj": pp, "n_p": n_p, "n_pconj": n_pp}]
    return CheckReport(name="abelian-selfduality", worst_violation=worst,
                       tolerance=tol, details=details)


def duality_gap(f: GroupAlgebraElement, p: float,
                cfg: EstimatorConfig | None = None) -> float:
    """|N_p(f) - N_{p'}(f)| / ||f||_1, the witness-search objective."""
    l1 = l1_norm(f)
    if l1 == 0.0:
        return 0.0
    m = regular_matrix(f)
    n_p = estimate_pnorm(m, p, cfg).lower
    n_pp = estimate_pnorm(m, conjugate_exponent(p), cfg).lower
    return abs(n_p - n_pp) / l1


def witness_search(group: FiniteGroup, p: float, restarts: int = 16,
                   iters: int = 300, seed: int = 0,
                   ) -> tuple[GroupAlgebraElement, float]:
    """Search for an element separating the p and p' convolution norms.

    Seeded random starts plus coordinate ascent over the 2|G| real degrees
    of freedom (step halving 0.5 down to 1e-6).  Returns the best element,
    normalized to unit l1 norm, with its certified gap re-measured at the
    default estimator settings.
    """
    if group.abelian_structure is not None or group.is_commutative:
        raise GroupError(f"group {group.name} is abelian; the gap vanishes")
    if not 1.0 < p < math.inf or p == 2.0:
        raise ValueError(f"witness search requires p in (1, inf) away from 2, got {p}")
    n = group.order
    pp = conjugate_exponent(p)

    def objective(vec: np.ndarray) -> float:
        l1 = float(np.sum(np.abs(vec)))
        if l1 == 0.0:
            return 0.0
        m = regular_matrix(GroupAlgebraElement(group, vec))
        lo_p = quick_norm_lower(m, p, restarts=3, max_iters=60, rel_tol=1e-6, seed=seed)
        lo_pp = quick_norm_lower(m, pp, restarts=3, max_iters=60, rel_tol=1e-6, seed=seed)
        return abs(lo_p - lo_pp) / l1

    best_vec = None
    best_gap = -1.0
    for k in range(restarts):
        rng = np.random.default_rng((seed, k))
        vec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        value = objective(vec)
        step = 0.5
        stale = 0
        budget = iters
        while budget > 0 and step >= 1e-6:
            coord = (iters - budget) % (2 * n)
            budget -= 1
            moved = False
            for delta in (step, -step):
                trial = vec.copy()
                if coord < n:
                    trial[coord] += delta
                else:
                    trial[coord - n] += 1j * delta
                trial_value = objective(trial)
                if trial_value > value:
                    vec, value = trial, trial_value
                    moved = True
                    break
            stale = 0 if moved else stale + 1
            if stale >= 2 * n:
                step *= 0.5
                stale = 0
        if value > best_gap:
            best_gap, best_vec = value, vec
    assert best_vec is not None
    best = GroupAlgebraElement(group, best_vec / l1_norm(GroupAlgebraElement(group, best_vec)))
    final_gap = duality_gap(best, p, EstimatorConfig(seed=seed))
    return best, final_gap


def check_subgroup_isometry(h: SubgroupHandle, f_on_h: GroupAlgebraElement, p: float,
                            cfg: EstimatorConfig | None = None,
                            tol: float = DEFAULT_TOL) -> CheckReport:
    """Zero-extension preserves the p->p norm, via right-coset blocks."""
    extended = embed_subgroup(h, f_on_h)
    blocks = coset_block_structure(h, extended)
    n_parent = estimate_pnorm(regular_matrix(extended), p, cfg).lower
    n_sub = estimate_pnorm(blocks.subgroup_matrix, p, cfg).lower
    worst = abs(n_parent - n_sub) / max(max(n_parent, n_sub), 1.0)
    if not blocks.identical:
        worst = math.inf
    details = [{"p": p, "n_parent": n_parent, "n_subgroup": n_sub,
                "blocks": blocks.num_blocks, "block_size": blocks.block_size,
                "blocks_identical": blocks.identical}]
    return CheckReport(name="subgroup-isometry", worst_violation=worst,
                       tolerance=tol, details=details)


def check_quotient_contraction(n: SubgroupHandle, f: GroupAlgebraElement, p: float,
                               cfg: EstimatorConfig | None = None,
                               tol: float = DEFAULT_TOL,
                               residual_tol: float = 1e-12) -> CheckReport:
    """Pushing forward to G/N does not increase the p->p norm; the averaging
    map intertwines the two convolution operators up to residual_tol."""
    if not n.is_normal:
        raise GroupError("quotient contraction requires a normal subgroup")
    qdata = quotient(n.parent, n)
    m_parent = regular_matrix(f)
    m_quot = quotient_compression(n, f, qdata)
    avg = coset_averaging_map(n, qdata)
    residual = float(np.max(np.abs(m_quot.entries @ avg - avg @ m_parent.entries)))
    n_parent = estimate_pnorm(m_parent, p, cfg).lower
    n_quot = estimate_pnorm(m_quot, p, cfg).lower
    contraction = (n_quot - n_parent) / max(n_parent, 1.0)
    worst = tol * max(contraction / tol, residual / residual_tol)
    details = [{"p": p, "n_parent": n_parent, "n_quotient": n_quot,
                "commuting_residual": residual}]
    return CheckReport(name="quotient-contraction", worst_violation=worst,
                       tolerance=tol, details=details)


def curve_sandwich_violation(curve: NormCurve) -> float:
    """Worst relative violation of  N_2(f) <= value(p) <= ||f||_1  over the
    grid.  Curve points are lower bounds, so the left comparison needs the
    usual estimator-aware relative tolerance."""
    m = regular_matrix(curve.f)
    n2 = estimate_pnorm(m, 2.0).lower
    l1 = l1_norm(curve.f)
    worst = 0.0
    for pt in curve.points:
        worst = max(worst,
                    (n2 - pt.lower) / max(n2, 1.0),
                    (pt.lower - l1) / max(l1, 1.0))
    return worst
