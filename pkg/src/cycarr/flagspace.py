"""Exact linear algebra of flag spaces and the algebra of logarithmic forms.

Flags of codimension p, modulo the flag relations, form a free module with the
preferred flags (basis_flags) as a basis; tuples of p hyperplanes, modulo
antisymmetry and the defining relations of the form algebra, form the dual
module with the dual tuples (H(L^1), ..., H(L^p)) of the preferred flags as a
basis.  The two bases are dual under the adjacency pairing, so normal forms on
either side are computed by pairing rather than by rewriting: the coordinate of
a flag F at a basis flag b is <F, dual_tuple(b)>, and the coordinate of a
tuple t at dual_tuple(b) is <b, t>.

The geometric form G^k(F, F') sums <F, t><F', t> prod a(H) over unordered
k-tuples t of hyperplanes of nonzero weight; passing an explicit universe
restricts it to a subarrangement.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

from .arrangement import (
    EMPTY,
    ArrangementSpec,
    Edge,
    FlagPath,
    Hyperplane,
    _step_hyperplanes,
    basis_flags,
    dual_tuple,
    edges_below,
    enumerate_hyperplanes,
    intersect_hyperplane,
)
from ._lin import lc_add

HTuple = tuple  # ordered tuple of Hyperplane, in wedge order


class NonUniquePermutation(Exception):
    """Two permutations realize the same flag from one tuple; impossible for
    valid flags, so this always signals an implementation bug."""


class _LinComb(dict):
    """Formal linear combination with Fraction coefficients; zeros dropped."""

    def __init__(self, data=None):
        super().__init__()
        if data:
            for key, c in data.items():
                c = Fraction(c)
                if c:
                    self[key] = c

    def __add__(self, other):
        return type(self)(lc_add(self, other))

    def __sub__(self, other):
        return type(self)(lc_add(self, (Fraction(-1), other)))

    def __neg__(self):
        return type(self)({k: -c for k, c in self.items()})

    def __rmul__(self, scalar):
        scalar = Fraction(scalar)
        return type(self)({k: scalar * c for k, c in self.items()})

    __mul__ = __rmul__

    @classmethod
    def of(cls, key, c=1):
        return cls({key: Fraction(c)})


class FlagVector(_LinComb):
    """Linear combination of flags of one common codimension."""

    def __repr__(self):
        if not self:
            return "FlagVector(0)"
        bits = [f"{c} * {F!r}" for F, c in sorted(self.items(), key=lambda kv: repr(kv[0]))]
        return "FlagVector(" + " + ".join(bits) + ")"


class FormVector(_LinComb):
    """Linear combination of hyperplane tuples of one common length."""

    def __repr__(self):
        if not self:
            return "FormVector(0)"
        bits = [f"{c} * {tuple_form_str(t)}"
                for t, c in sorted(self.items(), key=lambda kv: _tuple_sort_key(kv[0]))]
        return "FormVector(" + " + ".join(bits) + ")"

    def as_form_string(self) -> str:
        if not self:
            return "0"
        parts = []
        for t, c in sorted(self.items(), key=lambda kv: _tuple_sort_key(kv[0])):
            term = tuple_form_str(t)
            if c == 1:
                parts.append(term)
            elif c == -1:
                parts.append(f"-{term}")
            else:
                parts.append(f"{c} {term}")
        return " + ".join(parts)


class Weighting(dict):
    """Map hyperplane -> rational weight a(H); absent hyperplanes weigh 0."""

    def __missing__(self, H):
        return Fraction(0)


def random_weighting(spec: ArrangementSpec, seed: int) -> Weighting:
    """Generic nonzero rational weights, reproducible from the seed."""
    rng = random.Random(seed)
    a = Weighting()
    for H in enumerate_hyperplanes(spec):
        a[H] = Fraction(rng.choice((1, -1)) * rng.randint(1, 9), rng.randint(1, 9))
    return a


def _perm_sign(s) -> int:
    sign = 1
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


def adjacency_sign(F: FlagPath, t: HTuple) -> int:
    """(-1)^|s| for the unique permutation s of t realizing F step by step,
    or 0 when no permutation works."""
    k = len(t)
    if F.codim != k:
        raise ValueError(f"degree mismatch: flag has codim {F.codim}, tuple length {k}")
    found = None
    for s in itertools.permutations(range(k)):
        L = Edge.full(F.m, F.T)
        ok = True
        for r, idx in enumerate(s):
            L = intersect_hyperplane(L, t[idx])
            if L is EMPTY or L != F.steps[r]:
                ok = False
                break
        if ok:
            if found is not None:
                raise NonUniquePermutation(f"tuple {t!r} realizes {F!r} twice")
            found = _perm_sign(s)
    return 0 if found is None else found


@lru_cache(maxsize=None)
def _basis_by_deepest(spec: ArrangementSpec, p: int):
    """Basis flags of codim p with their dual tuples, grouped by deepest edge."""
    groups = {}
    for b in basis_flags(spec, p):
        groups.setdefault(b.deepest, []).append((b, dual_tuple(b, spec)))
    return {L: tuple(pairs) for L, pairs in groups.items()}


def is_basis_flag(F: FlagPath, spec: ArrangementSpec) -> bool:
    from .arrangement import framing_hyperplane

    L = Edge.full(F.m, F.T)
    for step in F.steps:
        L = intersect_hyperplane(L, framing_hyperplane(step, spec))
        if L != step:
            return False
    return True


def _as_flag_vector(v) -> FlagVector:
    if isinstance(v, FlagPath):
        return FlagVector.of(v)
    if isinstance(v, FlagVector):
        return v
    return FlagVector(v)


def _common_codim(v: FlagVector):
    degs = {F.codim for F in v}
    if len(degs) > 1:
        raise ValueError(f"mixed degrees {degs} in one vector")
    return degs.pop() if degs else None


def normalize_flag(v, spec: ArrangementSpec) -> FlagVector:
    """Coordinates of a flag (or flag vector) in the preferred basis."""
    out = {}
    for F, c in _as_flag_vector(v).items():
        for b, dt in _basis_by_deepest(spec, F.codim).get(F.deepest, ()):
            s = adjacency_sign(F, dt)
            if s:
                out[b] = out.get(b, Fraction(0)) + c * s
    return FlagVector(out)


def normalize_tuple(t: HTuple, spec: ArrangementSpec) -> FormVector:
    """Coordinates of a hyperplane tuple in the dual-tuple basis."""
    k = len(t)
    L = Edge.full(spec.m, spec.T)
    for H in t:
        L = intersect_hyperplane(L, H)
        if L is EMPTY:
            return FormVector()
    if L.codim != k:
        return FormVector()  # not in general position
    out = {}
    for b, dt in _basis_by_deepest(spec, k).get(L, ()):
        s = adjacency_sign(b, t)
        if s:
            out[dt] = Fraction(s)
    return FormVector(out)


def normalize_form(v, spec: ArrangementSpec) -> FormVector:
    if isinstance(v, tuple):
        return normalize_tuple(v, spec)
    acc = {}
    for t, c in v.items():
        acc = lc_add(acc, (c, normalize_tuple(t, spec)))
    return FormVector(acc)


def flag_differential(v, spec: ArrangementSpec) -> FlagVector:
    """Extension-of-flags differential: append every edge one step deeper."""
    raw = {}
    for F, c in _as_flag_vector(v).items():
        for E in edges_below(F.deepest, spec):
            key = F.extend(E)
            raw[key] = raw.get(key, Fraction(0)) + c
    return normalize_flag(FlagVector(raw), spec)


def aomoto_differential(x, a: Weighting, spec: ArrangementSpec) -> FormVector:
    """x -> x ^ sum_H a(H) H, in normal form."""
    if isinstance(x, tuple):
        x = FormVector.of(x)
    weighted = [(H, a[H]) for H in enumerate_hyperplanes(spec) if a[H]]
    acc = {}
    for t, c in x.items():
        for H, w in weighted:
            acc = lc_add(acc, (c * w, normalize_tuple(t + (H,), spec)))
    return FormVector(acc)


def _weighted_tuples(spec: ArrangementSpec, k: int, a: Weighting, universe=None):
    """Unordered k-tuples of distinct weighted hyperplanes whose intersection
    has codimension exactly k, with the intersection and the weight product."""
    hs = [H for H in (universe if universe is not None else enumerate_hyperplanes(spec))
          if a[H]]
    for t in itertools.combinations(hs, k):
        L = Edge.full(spec.m, spec.T)
        for H in t:
            L = intersect_hyperplane(L, H)
            if L is EMPTY:
                break
        if L is EMPTY or L.codim != k:
            continue
        w = Fraction(1)
        for H in t:
            w *= a[H]
        yield t, L, w


def _group_by_deepest(v: FlagVector):
    groups = {}
    for F, c in v.items():
        groups.setdefault(F.deepest, []).append((F, c))
    return groups


def geometric_form(v1, v2, a: Weighting, spec: ArrangementSpec, universe=None) -> Fraction:
    """G^k(F, F') = sum over unordered k-tuples t of <F,t><F',t> prod a(H)."""
    v1, v2 = _as_flag_vector(v1), _as_flag_vector(v2)
    if not v1 or not v2:
        return Fraction(0)
    k1, k2 = _common_codim(v1), _common_codim(v2)
    if k1 != k2:
        raise ValueError(f"degree mismatch {k1} != {k2}")
    g1, g2 = _group_by_deepest(v1), _group_by_deepest(v2)
    total = Fraction(0)
    for t, L, w in _weighted_tuples(spec, k1, a, universe):
        flags1 = g1.get(L)
        flags2 = g2.get(L)
        if not flags1 or not flags2:
            continue
        cache = {}

        def pair(F):
            if F not in cache:
                cache[F] = adjacency_sign(F, t)
            return cache[F]

        s1 = sum(c * pair(F) for F, c in flags1)
        if not s1:
            continue
        s2 = sum(c * pair(F) for F, c in flags2)
        total += s1 * s2 * w
    return total


def geometric_gram(vectors, a: Weighting, spec: ArrangementSpec, universe=None):
    """Gram matrix of the geometric form, sharing one tuple enumeration."""
    vecs = [_as_flag_vector(v) for v in vectors]
    degs = {_common_codim(v) for v in vecs if v}
    if len(degs) > 1:
        raise ValueError(f"mixed degrees {degs}")
    n = len(vecs)
    M = [[Fraction(0)] * n for _ in range(n)]
    if not degs:
        return M
    k = degs.pop()
    groups = [_group_by_deepest(v) for v in vecs]
    for t, L, w in _weighted_tuples(spec, k, a, universe):
        cache = {}
        row = []
        for idx, g in enumerate(groups):
            flags = g.get(L)
            if not flags:
                continue
            val = Fraction(0)
            for F, c in flags:
                if F not in cache:
                    cache[F] = adjacency_sign(F, t)
                val += c * cache[F]
            if val:
                row.append((idx, val))
        for i, vi in row:
            for j, vj in row:
                M[i][j] += w * vi * vj
    return M


def geometric_map(v, a: Weighting, spec: ArrangementSpec, universe=None) -> FormVector:
    """The form-valued map F -> sum_t <F,t> prod a(H) * t; adjoint to G."""
    v = _as_flag_vector(v)
    if not v:
        return FormVector()
    k = _common_codim(v)
    g = _group_by_deepest(v)
    acc = {}
    for t, L, w in _weighted_tuples(spec, k, a, universe):
        flags = g.get(L)
        if not flags:
            continue
        val = sum(c * adjacency_sign(F, t) for F, c in flags)
        if val:
            acc = lc_add(acc, (val * w, normalize_tuple(t, spec)))
    return FormVector(acc)


def canonical_element(spec: ArrangementSpec):
    """All pairs (basis flag of top degree, its dual tuple), by the recursion
    that ties coordinate m first, then m-1, and so on."""
    items = [(FlagPath.trivial(spec), ())]
    for i in range(spec.m, 0, -1):
        items = [(F.extend(intersect_hyperplane(F.deepest, H)), t + (H,))
                 for F, t in items for H in _step_hyperplanes(spec, i)]
    return items


def hyperplane_form_str(H: Hyperplane) -> str:
    if H.kind == "diag":
        rhs = f"w^{H.k} t{H.j}" if H.k else f"t{H.j}"
        return f"t{H.i} - {rhs}"
    if H.kind == "point":
        rhs = f"w^{H.k} z{H.j}" if H.k else f"z{H.j}"
        return f"t{H.i} - {rhs}"
    return f"t{H.i}"


def tuple_form_str(t: HTuple) -> str:
    if not t:
        return "1"
    return " ^ ".join(f"dlog({hyperplane_form_str(H)})" for H in t)


def _tuple_sort_key(t: HTuple):
    return tuple((H.kind, H.i, H.j, H.k) for H in t)
