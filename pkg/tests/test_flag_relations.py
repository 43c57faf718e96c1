"""The six families of defining relations of the flag spaces.

Every relation is a sum, with all coefficients +1, of W flags sharing all
steps except one, and must normalize to the zero vector.  The families:

  (i)   two disjoint joins, performed in either order            (W = 2)
  (ii)  a join and the fixing of a third island, either order    (W = 2)
  (iii) two islands fixed to distinct anchors, either order      (W = 2)
  (iv)  three islands joined pairwise first, three ways          (W = 3)
  (v)   two islands merged into one island fixed at z_j          (W = 3)
  (vi)  two islands merged into one island at zero: T joins
        plus zeroing either island first                         (W = T+2)
"""

import itertools

import pytest

from cycarr.arrangement import ArrangementSpec, FlagPath
from cycarr.flagspace import FlagVector, normalize_flag

from _helpers import cut, d, flag_from, o, z


def assert_relation(spec, flags):
    acc = FlagVector()
    for F in flags:
        acc = acc + normalize_flag(F, spec)
    assert acc == FlagVector(), f"relation failed for {flags!r}"


def fix_hyp(spec, coord, anchor, r):
    """Hyperplane sending w^r t_coord to its anchor (z_anchor, or 0)."""
    if anchor == 0:
        return o(coord)
    return z(coord, anchor, (-r) % spec.T, spec.T)


def two_then_deep(base_flag, intermediates, deep, suffixes=()):
    out = []
    for E in intermediates:
        F = base_flag.extend(E).extend(deep)
        for S in suffixes:
            F = F.extend(S)
        out.append(F)
    return out


# ---------------------------------------------------------------- family (i)


@pytest.mark.parametrize("T", [1, 2])
def test_family_i_two_disjoint_joins(T):
    spec = ArrangementSpec(4, T, 0, "C0")
    base = FlagPath.trivial(spec)
    coords = (1, 2, 3, 4)
    for pairing in [((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]:
        (a, b), (c, e) = pairing
        assert set(pairing[0]) | set(pairing[1]) == set(coords)
        for p in range(T):
            for q in range(T):
                e1 = cut(base.deepest, d(a, b, p, T))
                e2 = cut(base.deepest, d(c, e, q, T))
                deep = cut(e1, d(c, e, q, T))
                assert_relation(spec, two_then_deep(base, [e1, e2], deep))


# ---------------------------------------------------------------- family (ii)


@pytest.mark.parametrize("T,N", [(1, 1), (2, 1), (3, 1), (2, 2)])
def test_family_ii_join_and_fix_commute(T, N):
    spec = ArrangementSpec(3, T, N)
    base = FlagPath.trivial(spec)
    for i, j, l in itertools.permutations((1, 2, 3), 3):
        if i > j:
            continue
        for ell in range(T):
            join = d(i, j, ell, T)
            for anchor in range(N + 1):
                for r in range(T if anchor else 1):
                    fix = fix_hyp(spec, l, anchor, r)
                    e1 = cut(base.deepest, join)
                    e2 = cut(base.deepest, fix)
                    deep = cut(e1, fix)
                    assert_relation(spec, two_then_deep(base, [e1, e2], deep))


# ---------------------------------------------------------------- family (iii)


@pytest.mark.parametrize("m,T,N", [(2, 1, 1), (2, 2, 2), (2, 3, 2), (3, 2, 1)])
def test_family_iii_two_anchors_commute(m, T, N):
    spec = ArrangementSpec(m, T, N)
    base = FlagPath.trivial(spec)
    for i, j in itertools.combinations(range(1, m + 1), 2):
        for j1, j2 in itertools.permutations(range(N + 1), 2):
            for r1 in range(T if j1 else 1):
                for r2 in range(T if j2 else 1):
                    h1 = fix_hyp(spec, i, j1, r1)
                    h2 = fix_hyp(spec, j, j2, r2)
                    e1 = cut(base.deepest, h1)
                    e2 = cut(base.deepest, h2)
                    deep = cut(e1, h2)
                    assert_relation(spec, two_then_deep(base, [e1, e2], deep))


def test_family_iii_on_joined_islands():
    # J1 = {1,2} already joined, J2 = {3}; anchors 1 and 0
    T, N = 2, 1
    spec = ArrangementSpec(3, T, N)
    for kappa in range(T):
        base = flag_from(spec, [[d(1, 2, kappa, T)]])
        for r1 in range(T):
            h1 = fix_hyp(spec, 1, 1, r1)
            h2 = o(3)
            e1 = cut(base.deepest, h1)
            e2 = cut(base.deepest, h2)
            deep = cut(e1, h2)
            assert_relation(spec, two_then_deep(base, [e1, e2], deep))


# ---------------------------------------------------------------- family (iv)


@pytest.mark.parametrize("T,N", [(1, 0), (2, 0), (3, 0), (2, 1)])
def test_family_iv_three_joins(T, N):
    fam = "C0N" if N else "C0"
    spec = ArrangementSpec(3, T, N, fam)
    base = FlagPath.trivial(spec)
    for p in range(T):
        for q in range(T):
            # deep edge: t1 = w^p t2 = w^q t3
            deep = cut(base.deepest, d(1, 2, p, T), d(1, 3, q, T))
            e12 = cut(base.deepest, d(1, 2, p, T))
            e13 = cut(base.deepest, d(1, 3, q, T))
            e23 = cut(base.deepest, d(2, 3, (q - p) % T, T))
            assert_relation(spec, two_then_deep(base, [e12, e13, e23], deep))


# ---------------------------------------------------------------- family (v)


@pytest.mark.parametrize("T,N", [(1, 1), (2, 1), (3, 2)])
def test_family_v_join_to_anchor(T, N):
    spec = ArrangementSpec(2, T, N)
    base = FlagPath.trivial(spec)
    for anchor in range(1, N + 1):
        for ell in range(T):      # join phase: t1 = w^ell t2
            for r in range(T):    # anchor gauge: w^r t1 = z
                h_join = d(1, 2, ell, T)
                h_fix1 = fix_hyp(spec, 1, anchor, r)
                h_fix2 = fix_hyp(spec, 2, anchor, (r + ell) % T)
                e_join = cut(base.deepest, h_join)
                e_fix2 = cut(base.deepest, h_fix2)
                e_fix1 = cut(base.deepest, h_fix1)
                deep = cut(e_fix1, h_fix2)
                assert_relation(
                    spec, two_then_deep(base, [e_join, e_fix2, e_fix1], deep))


def test_family_v_with_spectator_island():
    T, N = 2, 1
    spec = ArrangementSpec(3, T, N)
    base = flag_from(spec, [[z(3, 1, 1, T)]])  # spectator: t3 = w z1
    for ell in range(T):
        for r in range(T):
            h_fix1 = fix_hyp(spec, 1, 1, r)
            h_fix2 = fix_hyp(spec, 2, 1, (r + ell) % T)
            e_join = cut(base.deepest, d(1, 2, ell, T))
            e_fix2 = cut(base.deepest, h_fix2)
            e_fix1 = cut(base.deepest, h_fix1)
            deep = cut(e_fix1, h_fix2)
            assert_relation(
                spec, two_then_deep(base, [e_join, e_fix2, e_fix1], deep))


# ---------------------------------------------------------------- family (vi)


@pytest.mark.parametrize("m,T,N", [(2, 1, 0), (2, 2, 0), (2, 3, 0), (2, 3, 1),
                                   (3, 2, 1)])
def test_family_vi_join_to_zero(m, T, N):
    fam = "C0N" if N else "C0"
    spec = ArrangementSpec(m, T, N, fam)
    base = FlagPath.trivial(spec)
    for i, j in itertools.combinations(range(1, m + 1), 2):
        joins = [cut(base.deepest, d(i, j, ell, T)) for ell in range(T)]
        zero_j2 = cut(base.deepest, o(j))
        zero_j1 = cut(base.deepest, o(i))
        deep = cut(zero_j1, o(j))
        assert_relation(
            spec, two_then_deep(base, joins + [zero_j2, zero_j1], deep))


def test_family_vi_verbatim_example():
    # (C2 > t1=0 > origin) + (C2 > t2=0 > origin) + sum_k (C2 > t1=w^k t2 > origin)
    T = 3
    spec = ArrangementSpec(2, T, 0, "C0")
    acc = normalize_flag(flag_from(spec, [[o(1)], [o(2)]]), spec)
    acc = acc + normalize_flag(flag_from(spec, [[o(2)], [o(1)]]), spec)
    for k in range(T):
        acc = acc + normalize_flag(flag_from(spec, [[d(1, 2, k, T)], [o(1)]]), spec)
    assert acc == FlagVector()


def test_family_vi_on_joined_island():
    # J1 = {1,2} joined with phase kappa, J2 = {3}; the joins use a fixed
    # choice of coordinate in J1, and either choice gives the same edges
    T, N = 2, 0
    spec = ArrangementSpec(3, T, N, "C0")
    for kappa in range(T):
        base = flag_from(spec, [[d(1, 2, kappa, T)]])
        for rep in (1, 2):
            joins = [cut(base.deepest, d(rep, 3, ell, T)) for ell in range(T)]
            zero_j2 = cut(base.deepest, o(3))
            zero_j1 = cut(base.deepest, o(1))
            deep = cut(zero_j1, o(3))
            assert_relation(
                spec, two_then_deep(base, joins + [zero_j2, zero_j1], deep))
        set_a = {cut(base.deepest, d(1, 3, ell, T)) for ell in range(T)}
        set_b = {cut(base.deepest, d(2, 3, ell, T)) for ell in range(T)}
        assert set_a == set_b


def test_family_vi_with_deeper_suffix():
    # the relation may sit above further common steps
    T = 2
    spec = ArrangementSpec(3, T, 0, "C0")
    base = FlagPath.trivial(spec)
    joins = [cut(base.deepest, d(1, 2, ell, T)) for ell in range(T)]
    zero_j2 = cut(base.deepest, o(2))
    zero_j1 = cut(base.deepest, o(1))
    deep = cut(zero_j1, o(2))
    suffix = cut(deep, o(3))
    assert_relation(
        spec,
        two_then_deep(base, joins + [zero_j2, zero_j1], deep, suffixes=[suffix]))


def test_family_vi_below_prefix_step():
    # the relation may also sit below a common shallower step
    T, N = 2, 1
    spec = ArrangementSpec(3, T, N)
    base = flag_from(spec, [[z(3, 1, 0, T)]])
    joins = [cut(base.deepest, d(1, 2, ell, T)) for ell in range(T)]
    zero_j2 = cut(base.deepest, o(2))
    zero_j1 = cut(base.deepest, o(1))
    deep = cut(zero_j1, o(2))
    assert_relation(spec, two_then_deep(base, joins + [zero_j2, zero_j1], deep))
