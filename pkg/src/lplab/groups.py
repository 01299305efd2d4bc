"""Finite groups as validated Cayley tables with 0-based dense element ids.

Conventions: the identity always has id 0, element ids are 0..order-1, and
``cayley[s][t]`` is the id of s*t.  Constructors relabel as needed so matrix
indexing downstream is stable.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MAX_ORDER = 256
_ASSOC_SAMPLES = 100_000


class GroupError(ValueError):
    """Raised for invalid group data or out-of-range constructor arguments."""


@dataclass(eq=False)
class FiniteGroup:
    name: str
    order: int
    labels: tuple[str, ...]
    cayley: np.ndarray
    inverse: np.ndarray
    identity: int = 0
    abelian_structure: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        self.cayley = np.ascontiguousarray(np.asarray(self.cayley, dtype=np.int64))
        self.inverse = np.ascontiguousarray(np.asarray(self.inverse, dtype=np.int64))
        _validate(self)
        self.cayley.setflags(write=False)
        self.inverse.setflags(write=False)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, s: int, t: int) -> int:
        return int(self.cayley[s, t])

    def inv(self, s: int) -> int:
        return int(self.inverse[s])

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def element_order(self, s: int) -> int:
        k, x = 1, s
        while x != self.identity:
            x = self.mul(x, s)
            k += 1
        return k

    def center(self) -> tuple[int, ...]:
        c = self.cayley
        return tuple(int(s) for s in self.elements
                     if np.array_equal(c[s], c[:, s]))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


def _validate(g: FiniteGroup) -> None:
    n = g.order
    if n <= 0:
        raise GroupError("order must be positive")
    if g.cayley.shape != (n, n):
        raise GroupError("cayley table shape mismatch")
    if g.inverse.shape != (n,):
        raise GroupError("inverse table shape mismatch")
    if len(g.labels) != n:
        raise GroupError("label count mismatch")
    if np.any(g.cayley < 0) or np.any(g.cayley >= n):
        raise GroupError("cayley entries out of range")
    if g.identity != 0:
        raise GroupError("identity must be element id 0")
    ids = np.arange(n)
    if not (np.array_equal(g.cayley[g.identity], ids)
            and np.array_equal(g.cayley[:, g.identity], ids)):
        raise GroupError("identity row/column violated")
    if not (np.array_equal(g.cayley[ids, g.inverse], np.zeros(n, dtype=np.int64))
            and np.array_equal(g.cayley[g.inverse, ids], np.zeros(n, dtype=np.int64))):
        raise GroupError("inverse table violated")
    _check_associativity(g.cayley)
    if g.abelian_structure is not None:
        if int(np.prod(g.abelian_structure)) != n:
            raise GroupError("abelian_structure does not multiply to order")
        if not np.array_equal(g.cayley, g.cayley.T):
            raise GroupError("abelian_structure on a non-commutative table")


def _check_associativity(cayley: np.ndarray) -> None:
    n = cayley.shape[0]
    if n <= MAX_ORDER:
        # (a*b)*c == a*(b*c) for all triples, in row blocks to bound memory
        block = max(1, (1 << 22) // (n * n + 1))
        for lo in range(0, n, block):
            rows = cayley[lo:lo + block]
            lhs = cayley[rows]              # [(a*b)*c]
            rhs = rows[:, cayley]           # [a*(b*c)]
            if not np.array_equal(lhs, rhs):
                raise GroupError("associativity violated")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
        if not np.array_equal(cayley[cayley[a, b], c], cayley[a, cayley[b, c]]):
            raise GroupError("associativity violated (sampled)")


def _inverses_from_table(cayley: np.ndarray) -> np.ndarray:
    n = cayley.shape[0]
    inv = np.full(n, -1, dtype=np.int64)
    rows, cols = np.nonzero(cayley == 0)
    inv[rows] = cols
    if np.any(inv < 0):
        raise GroupError("missing inverses")
    return inv


def make_cyclic(n: int) -> FiniteGroup:
    """Z_n under addition mod n."""
    if not 1 <= n <= MAX_ORDER:
        raise GroupError(f"cyclic order out of range: {n}")
    ids = np.arange(n)
    cayley = (ids[:, None] + ids[None, :]) % n
    return FiniteGroup(
        name=f"Z{n}",
        order=n,
        labels=tuple(str(k) for k in range(n)),
        cayley=cayley,
        inverse=(-ids) % n,
        abelian_structure=(n,),
    )


def make_dihedral(n: int) -> FiniteGroup:
    """D_n of order 2n: rotations r^0..r^{n-1} first, then reflections s*r^k."""
    if not 2 <= n <= 64:
        raise GroupError(f"dihedral parameter out of range: {n}")
    order = 2 * n
    cayley = np.zeros((order, order), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            cayley[i, j] = (i + j) % n                  # r^i r^j
            cayley[i, n + j] = n + (j - i) % n          # r^i (s r^j) = s r^{j-i}
            cayley[n + i, j] = n + (i + j) % n          # (s r^i) r^j
            cayley[n + i, n + j] = (j - i) % n          # (s r^i)(s r^j) = r^{j-i}
    labels = tuple(f"r{k}" for k in range(n)) + tuple(f"sr{k}" for k in range(n))
    return FiniteGroup(name=f"D{n}", order=order, labels=labels,
                       cayley=cayley, inverse=_inverses_from_table(cayley))


def make_symmetric(n: int) -> FiniteGroup:
    """S_n, elements ordered lexicographically by one-line notation."""
    if not 1 <= n <= 5:
        raise GroupError(f"symmetric parameter out of range: {n}")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    order = len(perms)
    cayley = np.zeros((order, order), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            cayley[i, j] = index[tuple(p[q[x]] for x in range(n))]
    labels = tuple("".join(str(x) for x in p) for p in perms)
    return FiniteGroup(name=f"S{n}", order=order, labels=labels,
                       cayley=cayley, inverse=_inverses_from_table(cayley))


_QUATERNION_UNITS = ("1", "i", "j", "k")
# unit products: _QMUL[a][b] = (sign, unit) for a*b
_QMUL = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def make_quaternion() -> FiniteGroup:
    """The quaternion group Q8 on {1,-1,i,-i,j,-j,k,-k}."""
    def enc(sign: int, unit: int) -> int:
        return 2 * unit + (0 if sign > 0 else 1)

    cayley = np.zeros((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            ua, sa = a // 2, 1 - 2 * (a % 2)
            ub, sb = b // 2, 1 - 2 * (b % 2)
            s, u = _QMUL[(ua, ub)]
            cayley[a, b] = enc(sa * sb * s, u)
    labels = []
    for u in _QUATERNION_UNITS:
        labels.extend([u, f"-{u}"])
    return FiniteGroup(name="Q8", order=8, labels=tuple(labels),
                       cayley=cayley, inverse=_inverses_from_table(cayley))


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Componentwise product; pair (a, b) is packed as a*|H| + b."""
    order = g.order * h.order
    if order > MAX_ORDER:
        raise GroupError(f"product order {order} exceeds cap {MAX_ORDER}")
    nh = h.order
    a = np.arange(order) // nh
    b = np.arange(order) % nh
    cayley = g.cayley[np.ix_(a, a)] * nh + h.cayley[np.ix_(b, b)]
    inverse = g.inverse[a] * nh + h.inverse[b]
    structure = None
    if g.abelian_structure is not None and h.abelian_structure is not None:
        structure = g.abelian_structure + h.abelian_structure
    labels = tuple(f"({g.labels[x]},{h.labels[y]})" for x, y in zip(a, b))
    return FiniteGroup(name=f"{g.name}x{h.name}", order=order, labels=labels,
                       cayley=cayley, inverse=inverse, abelian_structure=structure)


def opposite(g: FiniteGroup) -> FiniteGroup:
    """Same elements with reversed multiplication: s *_op t = t*s."""
    return FiniteGroup(name=f"{g.name}^op", order=g.order, labels=g.labels,
                       cayley=g.cayley.T, inverse=g.inverse,
                       abelian_structure=g.abelian_structure)


@dataclass(eq=False)
class SubgroupHandle:
    parent: FiniteGroup
    member_ids: tuple[int, ...]
    is_normal: bool = field(init=False)
    group: FiniteGroup = field(init=False)
    # parent element id -> subgroup element id, -1 outside the subgroup
    position: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        g = self.parent
        members = tuple(sorted(set(int(m) for m in self.member_ids)))
        if not members:
            raise GroupError("empty member set")
        if any(m < 0 or m >= g.order for m in members):
            raise GroupError("member id out of range")
        if g.identity not in members:
            raise GroupError("subgroup must contain the identity")
        self.member_ids = members
        member_set = frozenset(members)
        for m in members:
            if g.inv(m) not in member_set:
                raise GroupError(f"member {m} lacks its inverse in the set")
        sub = g.cayley[np.ix_(members, members)]
        if not member_set.issuperset(sub.ravel().tolist()):
            raise GroupError("member set is not closed under multiplication")
        position = np.full(g.order, -1, dtype=np.int64)
        for i, m in enumerate(members):
            position[m] = i
        self.position = position
        self.is_normal = _is_normal(g, members, member_set)
        labels = tuple(g.labels[m] for m in members)
        self.group = FiniteGroup(
            name=f"{g.name}<{','.join(str(m) for m in members)}>",
            order=len(members), labels=labels,
            cayley=position[sub], inverse=position[g.inverse[list(members)]],
        )

    @property
    def order(self) -> int:
        return len(self.member_ids)

    @cached_property
    def _quotient_cache(self) -> tuple["FiniteGroup", np.ndarray]:
        return _build_quotient(self.parent, self)

    def quotient_data(self) -> tuple["FiniteGroup", np.ndarray]:
        """Quotient group and projection, built once per handle so that
        repeated pushforwards share one group object."""
        return self._quotient_cache


def _is_normal(g: FiniteGroup, members: tuple[int, ...], member_set: frozenset) -> bool:
    for s in g.elements:
        conj = g.cayley[g.cayley[s, list(members)], g.inv(s)]
        if not member_set.issuperset(conj.tolist()):
            return False
    return True


def subgroup(g: FiniteGroup, member_ids) -> SubgroupHandle:
    return SubgroupHandle(parent=g, member_ids=tuple(member_ids))


def quotient(g: FiniteGroup, n: SubgroupHandle) -> tuple[FiniteGroup, np.ndarray]:
    """Quotient group G/N with the coset projection, for normal N.

    Coset ids follow the smallest parent id in each coset, so the identity
    coset is id 0.  The projection is verified to be a homomorphism.
    Results are cached on the handle, so the same group object comes back
    on every call.
    """
    if n.parent is not g:
        raise GroupError("subgroup handle belongs to a different group")
    return n.quotient_data()


def _build_quotient(g: FiniteGroup, n: SubgroupHandle) -> tuple[FiniteGroup, np.ndarray]:
    if not n.is_normal:
        raise GroupError("quotient requires a normal subgroup")
    members = list(n.member_ids)
    projection = np.full(g.order, -1, dtype=np.int64)
    reps: list[int] = []
    for s in g.elements:
        if projection[s] < 0:
            c = len(reps)
            reps.append(s)
            projection[g.cayley[s, members]] = c
    q_order = len(reps)
    q_cayley = projection[g.cayley[np.ix_(reps, reps)]]
    if not np.array_equal(projection[g.cayley],
                          q_cayley[projection[:, None], projection[None, :]]):
        raise GroupError("projection is not a homomorphism")
    q_inverse = projection[g.inverse[reps]]
    labels = tuple(f"[{g.labels[r]}]" for r in reps)
    q = FiniteGroup(name=f"{g.name}/N{n.order}", order=q_order, labels=labels,
                    cayley=q_cayley, inverse=q_inverse)
    return q, projection


_SPEC_ATOM = re.compile(r"^(z|d|s)(\d+)$|^(q8)$", re.IGNORECASE)


def parse_group_spec(spec: str) -> FiniteGroup:
    """Parse the mini-language: Z<n>, D<n>, S<n>, Q8, and x-products (e.g. Z2xZ4)."""
    if spec != spec.strip() or any(c.isspace() for c in spec):
        raise GroupError(f"whitespace is not allowed in group spec: {spec!r}")
    if not spec:
        raise GroupError("empty group spec")
    parts = spec.lower().split("x")
    factors = []
    for part in parts:
        m = _SPEC_ATOM.match(part)
        if not m:
            raise GroupError(f"unrecognized group spec atom: {part!r}")
        if m.group(3):
            factors.append(make_quaternion())
        else:
            kind, num = m.group(1), int(m.group(2))
            if kind == "z":
                factors.append(make_cyclic(num))
            elif kind == "d":
                factors.append(make_dihedral(num))
            else:
                factors.append(make_symmetric(num))
    g = factors[0]
    for h in factors[1:]:
        g = direct_product(g, h)
    return g
