"""Complex group-algebra elements and the maps between them.

Coefficients are dense complex vectors indexed by element id.  Convolution
and the coset pushforward use counting measure (plain sums, no averaging),
and all accumulations run in increasing element-id order so that algebraic
identities hold exactly when the inputs make float arithmetic exact.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Any

import numpy as np

from .groups import FiniteGroup, GroupError, SubgroupHandle, opposite, parse_group_spec, quotient


class AlgebraError(ValueError):
    """Raised for mismatched groups or malformed element data."""


@dataclass(eq=False)
class GroupAlgebraElement:
    group: FiniteGroup
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != (self.group.order,):
            raise AlgebraError("coefficient vector length must equal the group order")
        if not (np.all(np.isfinite(self.coeffs.real)) and np.all(np.isfinite(self.coeffs.imag))):
            raise AlgebraError("coefficients must be finite")

    def copy(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.group, self.coeffs.copy())


def delta(group: FiniteGroup, s: int) -> GroupAlgebraElement:
    """Point mass at element s."""
    c = np.zeros(group.order, dtype=np.complex128)
    c[s] = 1.0
    return GroupAlgebraElement(group, c)


def convolve(f: GroupAlgebraElement, g: GroupAlgebraElement) -> GroupAlgebraElement:
    """(f*g)(s) = sum_t f(t) g(t^{-1} s), accumulated in t order."""
    if f.group is not g.group:
        raise AlgebraError("convolution requires elements of the same group")
    grp = f.group
    out = np.zeros(grp.order, dtype=np.complex128)
    for t in grp.elements:
        out += f.coeffs[t] * g.coeffs[grp.cayley[grp.inverse[t]]]
    return GroupAlgebraElement(grp, out)


def sharp(f: GroupAlgebraElement) -> GroupAlgebraElement:
    """Coefficient reversal under inversion, f(s) -> f(s^{-1}).

    Discrete groups are unimodular, so the modular-function factor is 1 and
    this is an isometric anti-automorphism of the convolution algebra.
    """
    return GroupAlgebraElement(f.group, f.coeffs[f.group.inverse])


def l1_norm(f: GroupAlgebraElement) -> float:
    return float(np.sum(np.abs(f.coeffs)))


def embed_subgroup(h: SubgroupHandle, f_on_h: GroupAlgebraElement) -> GroupAlgebraElement:
    """Zero-extension of an element of the subgroup algebra to the parent."""
    if f_on_h.group is not h.group:
        raise AlgebraError("element is not defined over the given subgroup")
    out = np.zeros(h.parent.order, dtype=np.complex128)
    out[list(h.member_ids)] = f_on_h.coeffs
    return GroupAlgebraElement(h.parent, out)


def restrict_subgroup(h: SubgroupHandle, f: GroupAlgebraElement) -> GroupAlgebraElement:
    """Restriction onto the subgroup; requires f to vanish off the members."""
    if f.group is not h.parent:
        raise AlgebraError("element is not defined over the handle's parent group")
    mask = np.ones(h.parent.order, dtype=bool)
    mask[list(h.member_ids)] = False
    if np.any(f.coeffs[mask] != 0):
        raise AlgebraError("element is not supported on the subgroup")
    return GroupAlgebraElement(h.group, f.coeffs[list(h.member_ids)])


def push_quotient(n: SubgroupHandle, f: GroupAlgebraElement,
                  quotient_data: tuple[FiniteGroup, np.ndarray] | None = None,
                  ) -> GroupAlgebraElement:
    """Coset pushforward onto G/N: value at sN is the plain sum of f over sN.

    Summing (rather than averaging) keeps the map a contractive algebra
    homomorphism for the l1 norm.
    """
    if f.group is not n.parent:
        raise AlgebraError("element is not defined over the handle's parent group")
    if not n.is_normal:
        raise GroupError("pushforward requires a normal subgroup")
    q, projection = quotient_data if quotient_data is not None else quotient(n.parent, n)
    out = np.zeros(q.order, dtype=np.complex128)
    for s in f.group.elements:
        out[projection[s]] += f.coeffs[s]
    return GroupAlgebraElement(q, out)


def transport_op(f: GroupAlgebraElement,
                 opposite_group: FiniteGroup | None = None) -> GroupAlgebraElement:
    """Move f to the opposite group; coefficients are unchanged and
    convolution order reverses: (f *_op g) = (g * f)."""
    og = opposite_group if opposite_group is not None else opposite(f.group)
    if not np.array_equal(og.cayley, f.group.cayley.T):
        raise AlgebraError("target group is not the opposite of f's group")
    return GroupAlgebraElement(og, f.coeffs.copy())


def element_to_json(f: GroupAlgebraElement, group_spec: str | None = None) -> dict[str, Any]:
    return {
        "group": group_spec if group_spec is not None else f.group.name,
        "coeffs": [[float(c.real), float(c.imag)] for c in f.coeffs],
    }


def element_from_json(payload: dict[str, Any],
                      group: FiniteGroup | None = None) -> GroupAlgebraElement:
    if group is None:
        group = parse_group_spec(str(payload["group"]))
    raw = payload["coeffs"]
    coeffs = np.zeros(len(raw), dtype=np.complex128)
    for i, entry in enumerate(raw):
        if isinstance(entry, (int, float)):
            coeffs[i] = float(entry)
        else:
            re_part, im_part = entry
            coeffs[i] = complex(float(re_part), float(im_part))
    return GroupAlgebraElement(group, coeffs)


def element_from_csv(text: str, group: FiniteGroup) -> GroupAlgebraElement:
    """CSV with columns label,re,im; rows may come in any order."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["label", "re", "im"]:
        raise AlgebraError("element CSV must have header label,re,im")
    by_label = {lab: i for i, lab in enumerate(group.labels)}
    coeffs = np.zeros(group.order, dtype=np.complex128)
    for row in reader:
        label = row["label"]
        if label not in by_label:
            raise AlgebraError(f"unknown element label {label!r}")
        coeffs[by_label[label]] = complex(float(row["re"]), float(row["im"]))
    return GroupAlgebraElement(group, coeffs)


def element_to_csv(f: GroupAlgebraElement) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label", "re", "im"])
    for label, c in zip(f.group.labels, f.coeffs):
        writer.writerow([label, repr(float(c.real)), repr(float(c.imag))])
    return out.getvalue()
