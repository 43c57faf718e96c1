"""Lyndon machinery, invariant subalgebras, module forms, chain complex."""

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cycarr.arrangement import ArrangementSpec, Hyperplane, basis_flags
from cycarr.flagspace import random_weighting
from cycarr.freelie import (
    BarCommutator,
    ChainElem,
    Commutator,
    LieElem,
    MissingWeight,
    ModMonomial,
    act_nbar,
    all_words,
    bracket,
    bracket_bar,
    canonical_monomial,
    cfl,
    chain_basis,
    chain_differential,
    direct_shapovalov_n,
    e_action,
    expand,
    gamma,
    gen_a,
    gen_n,
    is_lyndon,
    lie_basis,
    lie_coords,
    lyndon_basis,
    lyndon_words,
    nbar_basis,
    project_bar,
    shapovalov_a,
    shapovalov_chain,
    slot0_form,
    slot_form,
    tau,
    u_nbar_basis,
)


def d(i, j, k, T):
    return Hyperplane.diag(i, j, k, T)


def z(i, j, k, T):
    return Hyperplane.point(i, j, k, T)


def o(i):
    return Hyperplane.zero(i)


def aword(*pairs):
    return tuple(pairs)


def t1word(*coords):
    return tuple((i, 0) for i in coords)


def random_lie(md, T, seed, alphabet="A"):
    import random
    rng = random.Random(seed)
    coords = {}
    for w in lyndon_words(alphabet, md, T):
        c = rng.randint(-4, 4)
        if c:
            coords[w] = Fraction(c)
    return LieElem(alphabet, coords, T)


# ------------------------------------------------------------------- Lyndon


def test_gamma_left_comb():
    g = gamma("A", t1word(5, 4, 3, 2, 1), 1)
    assert str(g) == "[[[[f^0@5, f^0@4], f^0@3], f^0@2], f^0@1]"


def test_gamma_mixed_word():
    g = gamma("A", t1word(2, 4, 5, 3, 1), 1)
    assert str(g) == "[f^0@2, [[f^0@4, [f^0@5, f^0@3]], f^0@1]]"


def test_cfl_factorizations():
    assert cfl("A", t1word(4, 1, 2, 3, 5)) == (
        t1word(4, 1), t1word(2), t1word(3), t1word(5))
    assert cfl("A", t1word(1, 2, 3, 4, 5)) == (
        t1word(1), t1word(2), t1word(3), t1word(4), t1word(5))


def test_counts_multiplicity_one_t1():
    for m in range(2, 6):
        md = tuple(range(1, m + 1))
        assert len(all_words("A", md, 1)) == math.factorial(m)
        assert len(lyndon_words("A", md, 1)) == math.factorial(m - 1)
        assert len(lyndon_basis("A", md, 1)) == math.factorial(m)


def test_lie_component_dims_phased():
    # free Lie component in multiplicity-one weight: (m-1)! T^m
    for m in (2, 3):
        for T in (1, 2, 3):
            md = tuple(range(1, m + 1))
            assert len(lyndon_words("A", md, T)) == math.factorial(m - 1) * T ** m


def test_gamma_requires_lyndon():
    with pytest.raises(ValueError):
        gamma("A", t1word(2, 1, 3), 1)


def test_gamma_expansion_is_unitriangular():
    for T, md in [(1, (1, 2, 3, 4)), (3, (1, 2))]:
        for w in lyndon_words("A", md, T):
            poly = expand(gamma("A", w, T))
            assert poly[w] == 1


@st.composite
def words(draw):
    T = 2
    letters = st.tuples(st.integers(1, 3), st.integers(0, T - 1))
    return tuple(draw(st.lists(letters, min_size=1, max_size=6)))


@given(words())
def test_cfl_properties(w):
    factors = cfl("A", w)
    assert sum(factors, ()) == w
    for f in factors:
        assert is_lyndon("A", f)
    if is_lyndon("A", w):
        assert factors == (w,)


# ------------------------------------------------------------- Lie algebra


def test_letter_bracket_normal_form():
    x = gen_a(1, 0, 1)
    y = gen_a(2, 0, 1)
    b = bracket(y, x)
    assert b.coords == {t1word(2, 1): Fraction(1)}
    assert bracket(x, y).coords == {t1word(2, 1): Fraction(-1)}


def test_bracket_antisymmetry():
    x = random_lie((1, 2), 2, seed=1)
    assert bracket(x, x).is_zero()


def test_jacobi():
    T = 2
    x = random_lie((1,), T, seed=2)
    y = random_lie((2,), T, seed=3)
    z_ = random_lie((3,), T, seed=4)
    s = (bracket(x, bracket(y, z_)) + bracket(y, bracket(z_, x))
         + bracket(z_, bracket(x, y)))
    assert s.is_zero()


def test_tau_is_bracket_morphism():
    T = 3
    x = random_lie((1, 2), T, seed=5)
    y = random_lie((3,), T, seed=6)
    assert bracket(tau(x), tau(y)) == tau(bracket(x, y))
    back = tau(tau(tau(x)))
    assert back == x


def test_lie_coords_rejects_non_lie():
    with pytest.raises(ValueError):
        lie_coords({t1word(1, 2): Fraction(1)}, "A", 1)


# ---------------------------------------------------- invariant subalgebra


def test_nbar_dims():
    for m in (2, 3, 4):
        for T in (1, 2, 3):
            md = tuple(range(1, m + 1))
            want = math.factorial(m - 1) * T ** (m - 1)
            assert len(nbar_basis(md, T)) == want


def test_u_nbar_dims():
    for m in (1, 2, 3, 4):
        for T in (1, 2, 3):
            md = tuple(range(1, m + 1))
            want = 1
            for k in range(1, m):
                want *= 1 + k * T
            assert len(u_nbar_basis(md, T)) == want


def test_project_bar_kills_tau():
    T = 3
    for w in lyndon_words("A", (1, 2), T):
        g = gamma("A", w, T)
        assert project_bar(tau(g)) == project_bar(g)


def test_bracket_bar_matches_orbit_expansion():
    T = 2
    x = BarCommutator.make(((2, 1), (1, 0)), T)
    y = BarCommutator.make((3, 0), T)
    combo = bracket_bar(x, y)
    # orbit sum of the result
    got = {}
    for bc, c in combo.items():
        for w, cw in bc.orbit_poly().items():
            got[w] = got.get(w, Fraction(0)) + c * cw
    # sum over both orbits of the plain bracket
    want = {}
    for s in range(T):
        for t in range(T):
            b = bracket(tau(Commutator("A", x.tree, T), s),
                        tau(Commutator("A", y.tree, T), t))
            for w, cw in expand(b).items():
                want[w] = want.get(w, Fraction(0)) + cw
    got = {w: c for w, c in got.items() if c}
    want = {w: c for w, c in want.items() if c}
    assert got == want


def test_straightening_reproduces_commutator():
    T = 1
    x = BarCommutator.make(((2, 0), (1, 0)), T)
    y = BarCommutator.make((3, 0), T)
    fwd = canonical_monomial((x, y), (), T)
    rev = canonical_monomial((y, x), (), T)
    diff = {}
    for mono, c in fwd.items():
        diff[mono] = diff.get(mono, Fraction(0)) + c
    for mono, c in rev.items():
        diff[mono] = diff.get(mono, Fraction(0)) - c
    diff = {k: c for k, c in diff.items() if c}
    want = {}
    for bc, c in bracket_bar(x, y).items():
        want[ModMonomial((bc,), ())] = c
    assert diff == want


# ------------------------------------------------------------ form, A side


def test_form_letters():
    T = 3
    spec = ArrangementSpec(2, T, 0, "C0")
    a = random_weighting(spec, seed=1)
    for k in range(T):
        for l in range(T):
            v = shapovalov_a(gen_a(1, k, T), gen_a(1, l, T), a)
            assert v == (1 if k == l else 0)
    assert shapovalov_a(gen_a(1, 0, T), gen_a(2, 0, T), a) == 0


def test_form_orbit_degree_two():
    for T in (1, 2, 3):
        spec = ArrangementSpec(2, T, 0, "C0")
        a = random_weighting(spec, seed=5)
        for p in range(T):
            x = BarCommutator.make(((2, p), (1, 0)), T)
            assert shapovalov_a(x, x, a) == -T * a[d(1, 2, p, T)]
        for p in range(T):
            for q in range(T):
                if p != q:
                    x = BarCommutator.make(((2, p), (1, 0)), T)
                    y = BarCommutator.make(((2, q), (1, 0)), T)
                    assert shapovalov_a(x, y, a) == 0


def test_form_degree_three():
    spec = ArrangementSpec(3, 1, 0, "C0")
    a = random_weighting(spec, seed=7)
    x = Commutator("A", (((3, 0), (2, 0)), (1, 0)), 1)
    want = a[d(2, 3, 0, 1)] * (a[d(1, 2, 0, 1)] + a[d(1, 3, 0, 1)])
    assert shapovalov_a(x, x, a) == want


def test_form_symmetric():
    T = 2
    spec = ArrangementSpec(3, T, 0, "C0")
    a = random_weighting(spec, seed=9)
    x = random_lie((1, 2, 3), T, seed=10)
    y = random_lie((1, 2, 3), T, seed=11)
    assert shapovalov_a(x, y, a) == shapovalov_a(y, x, a)
    bx = nbar_basis((1, 2, 3), T)
    for u in bx[:3]:
        for v in bx[:3]:
            assert shapovalov_a(u, v, a) == shapovalov_a(v, u, a)


def test_form_weight_orthogonal():
    spec = ArrangementSpec(3, 2, 0, "C0")
    a = random_weighting(spec, seed=12)
    x = gamma("A", ((2, 0), (1, 0)), 2)
    y = gamma("A", ((3, 0), (1, 0)), 2)
    assert shapovalov_a(x, y, a) == 0


def test_form_gauge_invariant():
    T = 3
    spec = ArrangementSpec(2, T, 0, "C0")
    a = random_weighting(spec, seed=13)
    x = random_lie((1, 2), T, seed=14)
    y = random_lie((1, 2), T, seed=15)
    assert shapovalov_a(tau(x), tau(y), a) == shapovalov_a(x, y, a)


# ------------------------------------------------------------ form, N side


def test_direct_n_degree_two():
    B = [[2, -1], [-1, 2]]
    x = bracket(gen_n(2), gen_n(1))
    assert direct_shapovalov_n(x, x, B) == 1
    B0 = [[2, 0], [0, 2]]
    assert direct_shapovalov_n(x, x, B0) == 0


def test_direct_n_symmetric():
    B = [[2, -1, 0], [-1, 4, -2], [0, -2, 6]]
    x = random_lie((1, 2, 3), 0, seed=16, alphabet="N")
    y = random_lie((1, 2, 3), 0, seed=17, alphabet="N")
    assert direct_shapovalov_n(x, y, B) == direct_shapovalov_n(y, x, B)


# ------------------------------------------------------------- slot forms


def test_slot_single_letter():
    T = 3
    spec = ArrangementSpec(2, T, 1)
    a = random_weighting(spec, seed=20)
    for k in range(T):
        f = gen_a(2, k, T)
        v = slot_form((f,), (f,), 1, a, T)
        assert v == -a[z(2, 1, -k, T)]
        out = e_action(f, {((2, k),): Fraction(1)}, a, 1)
        assert out == {(): -a[z(2, 1, -k, T)]}


def test_slot_two_letters_diagonal():
    T = 3
    spec = ArrangementSpec(2, T, 1)
    a = random_weighting(spec, seed=21)
    for p in range(T):
        for q in range(T):
            xc = (gen_a(1, p, T), gen_a(2, q, T))
            v = slot_form(xc, xc, 1, a, T)
            want = a[z(2, 1, -q, T)] * (a[z(1, 1, -p, T)] + a[d(1, 2, q - p, T)])
            assert v == want


def test_slot_two_letters_off_diagonal():
    T = 2
    spec = ArrangementSpec(2, T, 1)
    a = random_weighting(spec, seed=22)
    for p in range(T):
        for q in range(T):
            xc = (gen_a(1, p, T), gen_a(2, q, T))
            yc = (gen_a(2, q, T), gen_a(1, p, T))
            assert slot_form(xc, yc, 1, a, T) == a[z(1, 1, -p, T)] * a[z(2, 1, -q, T)]


def test_slot_bracket_content():
    T = 3
    spec = ArrangementSpec(2, T, 1)
    a = random_weighting(spec, seed=23)
    for p in range(T):
        for q in range(T):
            x = Commutator("A", ((2, (p + q) % T), (1, q)), T)
            v = slot_form((x,), (x,), 1, a, T)
            want = a[d(1, 2, p, T)] * (a[z(1, 1, -q, T)] + a[z(2, 1, -(p + q), T)])
            assert v == want


def test_slot_missing_weight():
    spec = ArrangementSpec(2, 2, 0, "C0")  # no marked points weighted
    a = random_weighting(spec, seed=24)
    f = gen_a(1, 0, 2)
    with pytest.raises(MissingWeight):
        slot_form((f,), (f,), 1, a, 2)


# ------------------------------------------------------------- slot 0 form


def test_slot0_single_factor():
    for T in (1, 2):
        spec = ArrangementSpec(2, T, 0, "C0")
        a = random_weighting(spec, seed=25)
        for i in (1, 2):
            b = BarCommutator.make((i, 0), T)
            assert slot0_form((b,), (b,), a) == -a[o(i)]


def test_slot0_pair_plain():
    T = 3
    spec = ArrangementSpec(2, T, 0, "C0")
    a = random_weighting(spec, seed=26)
    for k in range(T):
        for l in range(T):
            x = BarCommutator.make(((2, k), (1, 0)), T)
            y = BarCommutator.make(((2, l), (1, 0)), T)
            v = slot0_form((x,), (y,), a)
            if k == l:
                assert v == a[d(1, 2, k, T)] * (a[o(1)] + a[o(2)])
            else:
                assert v == 0


def test_slot0_pair_with_central():
    # central channel reproducing the closed form for a two-point support
    T = 3
    spec = ArrangementSpec(2, T, 0, "C0")
    a = random_weighting(spec, seed=27)

    def gauge(bc):
        # gauge-invariant phase between the two letters of the tree
        out = []

        def rec(t):
            if isinstance(t[0], int):
                out.append(t)
            else:
                rec(t[0])
                rec(t[1])

        rec(bc.tree)
        ks = dict(out)
        return (ks[2] - ks[1]) % T

    def central(p, y):
        kp, ky = gauge(p), gauge(y)
        tot = sum(a[d(1, 2, s, T)] for s in range(T))
        val = -a[d(1, 2, kp, T)] * a[d(1, 2, ky, T)]
        if kp == ky:
            val += a[d(1, 2, kp, T)] * tot
        return val

    tot = sum(a[d(1, 2, s, T)] for s in range(T))
    for k in range(T):
        for l in range(T):
            x = BarCommutator.make(((2, k), (1, 0)), T)
            y = BarCommutator.make(((2, l), (1, 0)), T)
            v = slot0_form((x,), (y,), a, central=central)
            want = -a[d(1, 2, k, T)] * a[d(1, 2, l, T)]
            if k == l:
                want += a[d(1, 2, k, T)] * (a[o(1)] + a[o(2)] + tot)
            assert v == want


def test_slot0_mixed_supports():
    spec = ArrangementSpec(3, 1, 0, "C0")
    a = random_weighting(spec, seed=28)
    b1 = BarCommutator.make((1, 0), 1)
    b23 = BarCommutator.make(((3, 0), (2, 0)), 1)
    y = BarCommutator.make((((3, 0), (2, 0)), (1, 0)), 1)
    want = a[d(2, 3, 0, 1)] * (a[d(1, 2, 0, 1)] + a[d(1, 3, 0, 1)]) * (a[o(2)] + a[o(3)])
    assert slot0_form((b1, b23), (y,), a) == want
    assert slot0_form((y,), (b1, b23), a) == want


def test_slot0_symmetric():
    T = 2
    spec = ArrangementSpec(3, T, 0, "C0")
    a = random_weighting(spec, seed=29)
    monos = u_nbar_basis((1, 2, 3), T)
    sub = monos[:6]
    for x in sub:
        for y in sub:
            assert slot0_form(x, y, a) == slot0_form(y, x, a)


def test_slot0_missing_weight():
    spec = ArrangementSpec(2, 1, 0, "C")  # no zero weights
    a = random_weighting(spec, seed=30)
    b = BarCommutator.make((1, 0), 1)
    with pytest.raises(MissingWeight):
        slot0_form((b,), (b,), a)


# ------------------------------------------------------------------ chains


def test_chain_dims_match_flag_side():
    cases = [(1, 1, 2), (2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1),
             (2, 2, 2), (3, 0, 2), (3, 1, 2)]
    for m, N, T in cases:
        spec = ArrangementSpec(m, T, N, "C0N" if N else "C0")
        for p in range(m + 1):
            assert len(chain_basis(m, N, T, p)) == len(basis_flags(spec, m - p))


def test_module_dim_formula():
    for m in (1, 2, 3):
        for N in (1, 2):
            for T in (1, 2, 3):
                want = 1
                for k in range(1, m + 1):
                    want *= 1 + (k - 1 + N) * T
                assert len(chain_basis(m, N, T, 0)) == want


def test_d_squared_zero():
    for m, N, T in [(2, 1, 2), (3, 1, 1), (3, 0, 2), (2, 2, 1)]:
        for p in range(m + 1):
            for ce in chain_basis(m, N, T, p):
                assert chain_differential(chain_differential(ce)).is_zero()


def test_differential_two_factor_wedge():
    T = 1
    b1 = BarCommutator.make((1, 0), T)
    b2 = BarCommutator.make((2, 0), T)
    b21 = BarCommutator.make(((2, 0), (1, 0)), T)
    x = ChainElem.unit((b1, b2), ModMonomial((), ()))
    want = (ChainElem.unit((b1,), ModMonomial((b2,), ()))
            - ChainElem.unit((b2,), ModMonomial((b1,), ()))
            + ChainElem.unit((b21,), ModMonomial((), ())))
    assert chain_differential(x) == want


def test_wedge_antisymmetry():
    T = 1
    b1 = BarCommutator.make((1, 0), T)
    b2 = BarCommutator.make((2, 0), T)
    m0 = ModMonomial((), ())
    assert ChainElem.unit((b2, b1), m0) == (-1) * ChainElem.unit((b1, b2), m0)
    assert ChainElem.unit((b1, b1), m0).is_zero()


def test_chain_form_top_wedge():
    T = 2
    spec = ArrangementSpec(2, T, 0, "C0")
    a = random_weighting(spec, seed=31)
    (ce,) = chain_basis(2, 0, T, 2)
    assert shapovalov_chain(ce, ce, a) == T * T


def test_chain_form_wedge_times_slot():
    T = 3
    spec = ArrangementSpec(2, T, 1)
    a = random_weighting(spec, seed=32)
    b1 = BarCommutator.make((1, 0), T)
    for k in range(T):
        ce = ChainElem.unit((b1,), ModMonomial((), ((gen_a(2, k, T),),)))
        assert shapovalov_chain(ce, ce, a) == T * (-a[z(2, 1, -k, T)])


def test_chain_gram_symmetric():
    m, N, T = 2, 1, 2
    spec = ArrangementSpec(m, T, N)
    a = random_weighting(spec, seed=33)
    cache = {}
    for p in range(m + 1):
        cb = chain_basis(m, N, T, p)
        gram = [[shapovalov_chain(x, y, a, cache=cache) for y in cb] for x in cb]
        for i in range(len(cb)):
            for j in range(len(cb)):
                assert gram[i][j] == gram[j][i]


def test_act_nbar_slots():
    T = 2
    b = BarCommutator.make((1, 0), T)
    mono = ModMonomial((), ((gen_a(2, 0, T),),))
    out = act_nbar(b, mono)
    assert out[ModMonomial((b,), ((gen_a(2, 0, T),),))] == 1
    for s in range(T):
        key = ModMonomial((), ((gen_a(1, s, T), gen_a(2, 0, T)),))
        assert out[key] == 1
