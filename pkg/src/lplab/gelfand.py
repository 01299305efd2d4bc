"""Characters and the Fourier/Gelfand transform for finite abelian groups.

Character tables are only built from constructor-provided cyclic-product
structure; abelian groups handed over as raw Cayley tables are rejected
rather than decomposed.  Characters are indexed lexicographically by their
exponent tuple, matching the element packing of direct products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import GroupAlgebraElement, l1_norm
from .groups import FiniteGroup, GroupError
from .operators import regular_matrix
from .pnorm import EstimatorConfig, estimate_pnorm, exact_norm
from .reporting import CheckReport


@dataclass(eq=False)
class CharacterTable:
    group: FiniteGroup
    table: np.ndarray          # table[j, g] = chi_j(g)
    exponents: np.ndarray      # exponents[j] = tuple of the j-th character

    @property
    def size(self) -> int:
        return self.group.order


def characters(group: FiniteGroup) -> CharacterTable:
    """Full character table of a group built as a product of cyclic factors."""
    if group.abelian_structure is None:
        raise GroupError(
            "characters require cyclic-product structure; rebuild the group "
            "from Z/D/S/Q constructors rather than a raw table")
    radices = np.asarray(group.abelian_structure, dtype=np.int64)
    n = group.order
    digits = np.stack(np.unravel_index(np.arange(n), tuple(radices)), axis=1)
    phase = (digits / radices) @ digits.T  # phase[j, g] = sum_t j_t g_t / n_t
    table = np.exp(2j * math.pi * phase)
    ct = CharacterTable(group=group, table=table, exponents=digits)
    _verify_table(ct)
    return ct


def _verify_table(ct: CharacterTable) -> None:
    g = ct.group
    t = ct.table
    n = g.order
    if np.max(np.abs(np.abs(t) - 1.0)) > 1e-12:
        raise GroupError("character values must be unimodular")
    # multiplicativity chi(g h) = chi(g) chi(h), row by row to bound memory
    for j in range(n):
        row = t[j]
        if np.max(np.abs(row[g.cayley] - row[:, None] * row[None, :])) > 1e-12:
            raise GroupError("character table is not multiplicative")
    gram = t @ t.conj().T
    if np.max(np.abs(gram - n * np.eye(n))) > 1e-9:
        raise GroupError("character rows are not orthogonal")


def inverse_character_index(ct: CharacterTable) -> np.ndarray:
    """Permutation sending each character index to its pointwise inverse."""
    radices = np.asarray(ct.group.abelian_structure, dtype=np.int64)
    inv_digits = (-ct.exponents) % radices
    return np.ravel_multi_index(tuple(inv_digits.T), tuple(radices))


def fourier(f: GroupAlgebraElement, ct: CharacterTable | None = None) -> np.ndarray:
    """Transform values f_hat(chi) = sum_g f(g) chi(g), in character order."""
    table = ct if ct is not None else characters(f.group)
    if table.group is not f.group:
        raise GroupError("character table belongs to a different group")
    return table.table @ f.coeffs


def fourier_to_json(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in values]


def check_gelfand_sandwich(f: GroupAlgebraElement, p: float,
                           cfg: EstimatorConfig | None = None,
                           tol: float = 1e-6) -> CheckReport:
    """Transform bound below, l1 bound above, equality at p = 2.

    Checks  max|f_hat| <= N_p(f) <= ||f||_1  at relative tolerance tol, the
    p = 2 identity |N_2 - max|f_hat|| <= 1e-8 relative, and injectivity of
    the transform as invertibility of the character matrix.
    """
    ct = characters(f.group)
    fhat = fourier(f, ct)
    gelfand_bound = float(np.max(np.abs(fhat)))
    n_p = estimate_pnorm(regular_matrix(f), p, cfg).lower
    l1 = l1_norm(f)
    n_2 = exact_norm(regular_matrix(f), 2)
    eq2 = abs(n_2 - gelfand_bound) / max(n_2, 1.0)
    # sub-checks have different tolerances (the p=2 identity is tight at
    # 1e-8); each is scaled so that worst <= tol means all of them hold
    worst = tol * max(
        (gelfand_bound - n_p) / max(n_p, 1.0) / tol,
        (n_p - l1) / max(l1, 1.0) / tol,
        eq2 / 1e-8,
    )
    rank = int(np.linalg.matrix_rank(ct.table))
    if rank != f.group.order:
        worst = math.inf
    details = [{
        "p": float(p),
        "gelfand_bound": gelfand_bound,
        "n_p": n_p,
        "l1": l1,
        "n_2": n_2,
        "p2_gap_rel": eq2,
        "character_rank": rank,
    }]
    return CheckReport(name="gelfand-sandwich", worst_violation=float(worst),
                       tolerance=tol, details=details)
