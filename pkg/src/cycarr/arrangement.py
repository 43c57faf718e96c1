"""Cyclotomic discriminantal arrangements in C^m.

Coordinates are t_1, ..., t_m.  With w a fixed primitive T-th root of unity and
z_1, ..., z_N nonzero points with pairwise disjoint w-orbits, the hyperplanes are

    diag(i, j, k):   t_i = w^k t_j      (stored with i < j)
    point(i, j, k):  t_i = w^k z_j
    zero(i):         t_i = 0

Edges (nonempty intersections of hyperplanes) are encoded combinatorially as
"archipelagos" of islands over the coordinate set:

  * a swimming island ties a set of coordinates together,
    w^{p_c} t_c all equal, with the phase of the smallest coordinate
    normalised to 0;
  * a fixed island anchored at z_j imposes w^{r_c} t_c = z_j with absolute
    phases r_c;
  * the zero island sets its coordinates to 0.

All phase arithmetic is mod T, so no cyclotomic number arithmetic is needed.
Intersections are computed by a union-find with phase potentials; a phase
conflict inside a swimming component collapses it to the zero island, while a
conflict involving an anchor (or two distinct anchors) makes the intersection
empty, since the z_j are nonzero with disjoint orbits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

FAMILIES = ("C", "C0", "C0N")


@dataclass(frozen=True)
class Hyperplane:
    kind: str  # "diag" | "point" | "zero"
    i: int
    j: int = 0
    k: int = 0

    @staticmethod
    def diag(i: int, j: int, k: int, T: int) -> "Hyperplane":
        """t_i = w^k t_j.  Normalised so the stored pair has i < j."""
        if i == j:
            raise ValueError("diagonal hyperplane needs distinct coordinates")
        if i > j:
            i, j, k = j, i, -k
        return Hyperplane("diag", i, j, k % T)

    @staticmethod
    def point(i: int, j: int, k: int, T: int) -> "Hyperplane":
        """t_i = w^k z_j."""
        return Hyperplane("point", i, j, k % T)

    @staticmethod
    def zero(i: int) -> "Hyperplane":
        return Hyperplane("zero", i)

    def coords(self):
        if self.kind == "diag":
            return (self.i, self.j)
        return (self.i,)

    def top_coord(self) -> int:
        # the larger coordinate for diagonals, the only one otherwise
        return self.j if self.kind == "diag" else self.i

    def __repr__(self):
        if self.kind == "diag":
            return f"(t{self.i}=w^{self.k}t{self.j})" if self.k else f"(t{self.i}=t{self.j})"
        if self.kind == "point":
            return f"(t{self.i}=w^{self.k}z{self.j})" if self.k else f"(t{self.i}=z{self.j})"
        return f"(t{self.i}=0)"


class _EmptyEdge:
    """Sentinel for an empty intersection."""

    def is_empty(self):
        return True

    def __repr__(self):
        return "Empty"


EMPTY = _EmptyEdge()


@dataclass(frozen=True)
class Edge:
    """An edge, i.e. a nonempty intersection of hyperplanes (or all of C^m).

    swim:  frozenset of islands, each a tuple ((c, p), ...) sorted by c with
           min-coordinate phase 0 and at least two coordinates
    fixed: frozenset of (j, ((c, r), ...)) anchored islands, one per anchor
    zero:  frozenset of coordinates equal to 0
    """

    m: int
    T: int
    swim: frozenset
    fixed: frozenset
    zero: frozenset

    @staticmethod
    def full(m: int, T: int) -> "Edge":
        return Edge(m, T, frozenset(), frozenset(), frozenset())

    def is_empty(self):
        return False

    @property
    def codim(self) -> int:
        c = sum(len(isl) - 1 for isl in self.swim)
        c += sum(len(pairs) for _, pairs in self.fixed)
        c += len(self.zero)
        return c

    def constrained(self) -> frozenset:
        """Coordinates touched by any island."""
        out = set(self.zero)
        for isl in self.swim:
            out.update(c for c, _ in isl)
        for _, pairs in self.fixed:
            out.update(c for c, _ in pairs)
        return frozenset(out)

    def __repr__(self):
        bits = []
        for isl in sorted(self.swim):
            bits.append("{" + ", ".join(f"w^{p}t{c}" if p else f"t{c}" for c, p in isl) + " equal}")
        for j, pairs in sorted(self.fixed):
            bits.append("{" + ", ".join(f"w^{r}t{c}" if r else f"t{c}" for c, r in pairs) + f" = z{j}" + "}")
        if self.zero:
            bits.append("{" + ", ".join(f"t{c}" for c in sorted(self.zero)) + " = 0}")
        return "Edge(" + ("; ".join(bits) if bits else "C^m") + ")"


def _merge(m: int, T: int, constraints: Iterable[tuple]):
    """Union-find with phase potentials.

    Constraints are tuples:
        ("tt", c, d, k)  meaning t_c = w^k t_d
        ("tz", c, j, r)  meaning w^r t_c = z_j
        ("t0", c)        meaning t_c = 0
    Returns an Edge or EMPTY.
    """
    parent = {}
    pot = {}        # t_node = w^{pot[node]} * t_parent[node]
    anchor_of = {}  # root -> anchor index j, if an anchor node is in the tree
    zeroed = set()  # roots whose component is forced to zero

    def add(x):
        if x not in parent:
            parent[x] = x
            pot[x] = 0
            if isinstance(x, tuple) and x[0] == "z":
                anchor_of[x] = x[1]
            if x == "O":
                zeroed.add(x)

    def root_of(x):
        add(x)
        ph = 0
        while parent[x] != x:
            ph += pot[x]
            x = parent[x]
        return x, ph % T

    def union(x, y, d):
        # impose t_x = w^d * t_y; returns False when the system becomes empty
        rx, px = root_of(x)
        ry, py = root_of(y)
        if rx == ry:
            if (px - py - d) % T != 0:
                # phase conflict: the component collapses to zero, which is
                # empty if it holds an anchor (z_j != 0)
                if rx in anchor_of:
                    return False
                zeroed.add(rx)
            return True
        ax, ay = anchor_of.get(rx), anchor_of.get(ry)
        if ax is not None and ay is not None:
            return False  # z-orbits are disjoint, two anchors never meet
        if (ax is not None and ry in zeroed) or (ay is not None and rx in zeroed):
            return False
        parent[rx] = ry
        pot[rx] = (d + py - px) % T
        if ax is not None:
            anchor_of[ry] = ax
        if rx in zeroed:
            zeroed.add(ry)
        return True

    for con in constraints:
        if con[0] == "tt":
            _, c, d, k = con
            ok = union(c, d, k)
        elif con[0] == "tz":
            _, c, j, r = con
            ok = union(c, ("z", j), (-r) % T)  # t_c = w^{-r} z_j
        elif con[0] == "t0":
            _, c = con
            ok = union(c, "O", 0)
        else:
            raise ValueError(con)
        if not ok:
            return EMPTY

    groups = {}
    for node in list(parent):
        root, ph = root_of(node)
        groups.setdefault(root, []).append((node, ph))

    swim, fixed, zero = [], {}, set()
    for root, members in groups.items():
        coords = [(n, ph) for n, ph in members if isinstance(n, int)]
        if root in zeroed:
            zero.update(c for c, _ in coords)
        elif root in anchor_of:
            j = anchor_of[root]
            pa = next(ph for n, ph in members if n == ("z", j))
            # t_c = w^{ph_c} val, z_j = w^{pa} val  =>  w^{pa - ph_c} t_c = z_j
            pairs = tuple(sorted((c, (pa - ph) % T) for c, ph in coords))
            if pairs:
                fixed[j] = pairs
        elif len(coords) >= 2:
            # t_c = w^{ph_c} val; normalise so the smallest coordinate has
            # swimming phase 0: p_c = ph_base - ph_c
            base_ph = min(coords)[1]
            isl = tuple(sorted((c, (base_ph - ph) % T) for c, ph in coords))
            swim.append(isl)
    return Edge(m, T, frozenset(swim), frozenset((j, p) for j, p in fixed.items()),
                frozenset(zero))


def _edge_constraints(e: Edge):
    for isl in e.swim:
        (c0, p0) = isl[0]
        for c, p in isl[1:]:
            # w^{p} t_c = w^{p0} t_{c0}  =>  t_c = w^{p0 - p} t_{c0}
            yield ("tt", c, c0, (p0 - p) % e.T)
    for j, pairs in e.fixed:
        for c, r in pairs:
            yield ("tz", c, j, r)
    for c in e.zero:
        yield ("t0", c)


def edge_of_hyperplane(H: Hyperplane, m: int, T: int):
    if H.kind == "diag":
        return _merge(m, T, [("tt", H.i, H.j, H.k)])
    if H.kind == "point":
        # t_i = w^k z_j  =>  w^{-k} t_i = z_j
        return _merge(m, T, [("tz", H.i, H.j, (-H.k) % T)])
    return _merge(m, T, [("t0", H.i)])


def intersect(a: Edge, b) :
    """Intersection of two edges (or EMPTY)."""
    if a is EMPTY or b is EMPTY:
        return EMPTY
    assert a.m == b.m and a.T == b.T
    cons = list(_edge_constraints(a)) + list(_edge_constraints(b))
    return _merge(a.m, a.T, cons)


def intersect_hyperplane(L: Edge, H: Hyperplane):
    return intersect(L, edge_of_hyperplane(H, L.m, L.T))


def contains(L: Edge, H: Hyperplane) -> bool:
    """Is the edge L a subset of the hyperplane H?"""
    return intersect_hyperplane(L, H) == L


@dataclass(frozen=True)
class ArrangementSpec:
    m: int
    T: int
    N: int = 0
    family: str = "C0N"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.m < 1 or self.T < 1 or self.N < 0:
            raise ValueError("need m >= 1, T >= 1, N >= 0")

    def full_edge(self) -> Edge:
        return Edge.full(self.m, self.T)


def enumerate_hyperplanes(spec: ArrangementSpec, family: Optional[str] = None):
    """All hyperplanes of the arrangement, in a fixed canonical order."""
    fam = family or spec.family
    if fam not in FAMILIES:
        raise ValueError(f"unknown family {fam!r}")
    m, T, N = spec.m, spec.T, spec.N
    out = []
    for i, j in itertools.combinations(range(1, m + 1), 2):
        for k in range(T):
            out.append(Hyperplane.diag(i, j, k, T))
    if fam in ("C0", "C0N"):
        for i in range(1, m + 1):
            out.append(Hyperplane.zero(i))
    if fam == "C0N":
        for i in range(1, m + 1):
            for j in range(1, N + 1):
                for k in range(T):
                    out.append(Hyperplane.point(i, j, k, T))
    return out


def hyperplane_order_key(spec: ArrangementSpec):
    """Position of each hyperplane in the canonical enumeration order."""
    return {H: n for n, H in enumerate(enumerate_hyperplanes(spec))}


def framing_hyperplane(L: Edge, spec: ArrangementSpec) -> Hyperplane:
    """The distinguished hyperplane containing a (proper) edge.

    Scan top coordinates j = 1, 2, ...; for the smallest j such that some
    hyperplane with top coordinate j contains L, prefer zero(j), then the
    point hyperplane at j, then diag(i, j, k) with i smallest.
    """
    if L.codim == 0:
        raise ValueError("the full space has no framing hyperplane")
    m, T, N = spec.m, spec.T, spec.N
    for j in range(1, m + 1):
        if spec.family in ("C0", "C0N"):
            H = Hyperplane.zero(j)
            if contains(L, H):
                return H
        if spec.family == "C0N":
            for jz in range(1, N + 1):
                for k in range(T):
                    H = Hyperplane.point(j, jz, k, T)
                    if contains(L, H):
                        return H
        for i in range(1, j):
            for k in range(T):
                H = Hyperplane.diag(i, j, k, T)
                if contains(L, H):
                    return H
    raise ValueError(f"no hyperplane of the arrangement contains {L!r}")


@dataclass(frozen=True)
class FlagPath:
    """A flag C^m = L^0 > L^1 > ... > L^p with L^i an edge of codimension i."""

    m: int
    T: int
    steps: tuple

    @staticmethod
    def trivial(spec: ArrangementSpec) -> "FlagPath":
        return FlagPath(spec.m, spec.T, ())

    @property
    def codim(self) -> int:
        return len(self.steps)

    @property
    def deepest(self) -> Edge:
        return self.steps[-1] if self.steps else Edge.full(self.m, self.T)

    def extend(self, L: Edge) -> "FlagPath":
        assert L.codim == self.codim + 1
        return FlagPath(self.m, self.T, self.steps + (L,))

    def __repr__(self):
        return "Flag(C^m > " + " > ".join(repr(L) for L in self.steps) + ")" if self.steps \
            else "Flag(C^m)"


def _require_zero_family(spec: ArrangementSpec):
    # the per-coordinate recursion below needs every coordinate to have a
    # step hyperplane, which fails for the diagonal-only family (coordinate 1
    # has none, yet flags ending at t_i=t_j=0 exist); that family is only
    # used as a tuple universe for the geometric form
    if spec.family == "C":
        raise ValueError(
            "preferred flags are defined for the families with zero "
            "hyperplanes (C0, C0N); use the diagonal-only family as a "
            "universe for forms instead")


def _step_hyperplanes(spec: ArrangementSpec, i: int):
    """Hyperplanes available to tie coordinate i, with i as top coordinate."""
    out = []
    for j in range(1, i):
        for k in range(spec.T):
            out.append(Hyperplane.diag(j, i, k, spec.T))
    if spec.family in ("C0", "C0N"):
        out.append(Hyperplane.zero(i))
    if spec.family == "C0N":
        for j in range(1, spec.N + 1):
            for k in range(spec.T):
                out.append(Hyperplane.point(i, j, k, spec.T))
    return out


def basis_flags_for(spec: ArrangementSpec, I) -> list:
    """Preferred flags whose constrained coordinate set is I.

    Built greedily, tying the largest coordinate of I first; the flag's step r
    ties the r-th largest coordinate of I by a hyperplane whose top coordinate
    is that coordinate.
    """
    _require_zero_family(spec)
    flags = [FlagPath.trivial(spec)]
    for i in sorted(I, reverse=True):
        nxt = []
        for F in flags:
            for H in _step_hyperplanes(spec, i):
                L = intersect_hyperplane(F.deepest, H)
                nxt.append(F.extend(L))
        flags = nxt
    return flags


def basis_flags(spec: ArrangementSpec, p: int) -> list:
    """All preferred flags of codimension p, grouped by index set I."""
    out = []
    for I in itertools.combinations(range(1, spec.m + 1), p):
        out.extend(basis_flags_for(spec, I))
    return out


def flag_support(F: FlagPath) -> tuple:
    return tuple(sorted(F.deepest.constrained()))


def flag_index_set(F: FlagPath, spec: ArrangementSpec) -> tuple:
    """Index set I of a preferred flag: the top coordinates of its framing
    hyperplanes.  A step may tie t_i to a coordinate outside I, so this is
    not the same as the constrained coordinate set."""
    return tuple(sorted(framing_hyperplane(L, spec).top_coord() for L in F.steps))


def dual_tuple(F: FlagPath, spec: ArrangementSpec) -> tuple:
    """The tuple of framing hyperplanes (H(L^1), ..., H(L^p))."""
    return tuple(framing_hyperplane(L, spec) for L in F.steps)


def edges_below(L: Edge, spec: ArrangementSpec) -> list:
    """Distinct edges of codimension codim(L) + 1 contained in L."""
    seen = []
    for H in enumerate_hyperplanes(spec):
        E = intersect_hyperplane(L, H)
        if E is EMPTY or E.codim != L.codim + 1:
            continue
        if E not in seen:
            seen.append(E)
    return seen


def poincare(spec: ArrangementSpec) -> list:
    """Coefficients [c_0, ..., c_m] of the Poincare polynomial.

    c_p counts the preferred flags of codimension p; the polynomial factors as
    prod_{i=1}^{m} (1 + e_i x) with e_i the number of step hyperplanes at i.
    """
    _require_zero_family(spec)
    coeffs = [1]
    for i in range(1, spec.m + 1):
        e = len(_step_hyperplanes(spec, i))
        nxt = [0] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d] += c
            nxt[d + 1] += c * e
        coeffs = nxt
    return coeffs
