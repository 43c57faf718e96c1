"""Free Lie algebras on phased generators, invariant subalgebras, modules.

Two alphabets occur.  The "A" alphabet has letters f^k@i with a coordinate
i in 1..m and a phase k in Z_T; the shift tau raises every phase by one.
The "N" alphabet has unphased letters F@i used on the folded side.

Lie elements are kept in a Lyndon normal form.  Words are compared rightmost
letter first (the key of a word is its reversed letter sequence); a word is
Lyndon when it is strictly smaller than all its rotations; gamma(w) brackets
[gamma(u), gamma(v)] where u is the longest Lyndon proper prefix of w.  Every
word then factors uniquely into nondecreasing Lyndon factors, and the
products of the bracketings of the factors give PBW bases.

The invariant subalgebra nbar consists of phase-orbit sums.  A projected
commutator is stored by a gauge-normalised representative tree; a basis of
each weight component is extracted greedily from the projected Lyndon
bracketings, and arbitrary orbit sums are re-expanded over that basis by an
exact linear solve.

Modules: slot 0 carries products of projected commutators acting on a vacuum
v0, slots 1..N carry products of A-letters (or bracket trees) acting on v_j.
Raising letters move through words; the Cartan elements created on the way
act diagonally with weights of diagonal hyperplanes, and the vacua contribute
weights of zero (slot 0) or marked-point (slot j) hyperplanes.

Forms.  shapovalov_a peels one generator at a time, after a Jacobi rewrite
to generator-led trees, with S([x, Y], Z) = S(Y, [phi(x), Z]) for a letter x;
phi reverses a tree with sign (-1)^(degree-1).  Slot forms follow
S(x v, w) = S(v, phi(x) w).  The slot-0 recursion works entirely at the
level of projected commutators: a raising orbit sum meeting a factor of
equal support collapses to the Cartan orbit sums (with coefficient
S_a/T) plus an optional central correction supplied by the caller, a factor
of strictly larger support is lowered, and all other support patterns give
zero.  shapovalov_chain multiplies the wedge determinant of shapovalov_a
pairings by the slot forms.  direct_shapovalov_n runs the same peeling
engine on the N alphabet with Cartan-matrix coefficients for every pair.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._lin import SpanSolver, lc_add, lc_scale
from .arrangement import Hyperplane


class MissingWeight(KeyError):
    """A form needed the weight of a hyperplane the weighting does not list."""


def _aw(a, H):
    if H not in a:
        raise MissingWeight(H)
    return a[H]


# ---------------------------------------------------------------------------
# letters and trees

def _is_leaf(alphabet, t):
    if alphabet == "A":
        return isinstance(t[0], int)
    return isinstance(t, int)


def _tree_key(alphabet, t):
    if _is_leaf(alphabet, t):
        return (0, t) if alphabet == "A" else (0, (t,))
    l, r = t
    return (1, _tree_key(alphabet, l), _tree_key(alphabet, r))


def _leaves(alphabet, t):
    if _is_leaf(alphabet, t):
        return [t]
    return _leaves(alphabet, t[0]) + _leaves(alphabet, t[1])


def _tree_content(alphabet, t):
    if alphabet == "A":
        return tuple(sorted(i for i, _ in _leaves("A", t)))
    return tuple(sorted(_leaves("N", t)))


def _mirror(alphabet, t):
    if _is_leaf(alphabet, t):
        return t
    l, r = t
    return (_mirror(alphabet, r), _mirror(alphabet, l))


def _tau_tree(t, s, T):
    if isinstance(t[0], int):
        return (t[0], (t[1] + s) % T)
    return (_tau_tree(t[0], s, T), _tau_tree(t[1], s, T))


@dataclass(frozen=True)
class Commutator:
    """Binary bracket tree over one alphabet; a leaf is a single generator."""

    alphabet: str
    tree: object
    T: int = 0  # 0 for the N alphabet

    @property
    def degree(self):
        return len(_leaves(self.alphabet, self.tree))

    @property
    def content(self):
        return _tree_content(self.alphabet, self.tree)

    def __str__(self):
        def s(t):
            if _is_leaf(self.alphabet, t):
                return f"f^{t[1]}@{t[0]}" if self.alphabet == "A" else f"F@{t}"
            return f"[{s(t[0])}, {s(t[1])}]"
        return s(self.tree)

    __repr__ = __str__


def gen_a(i, k, T):
    return Commutator("A", (i, k % T), T)


def gen_n(i):
    return Commutator("N", i)


GenA = gen_a
GenN = gen_n


def tau(x, s=1):
    """Raise every phase by s (A alphabet; identity on projected commutators)."""
    if isinstance(x, BarCommutator):
        return x
    if isinstance(x, Commutator):
        return Commutator("A", _tau_tree(x.tree, s, x.T), x.T)
    if isinstance(x, LieElem):
        poly = expand(x)
        shifted = {tuple((i, (k + s) % x.T) for i, k in w): c for w, c in poly.items()}
        return LieElem("A", lie_coords(shifted, "A", x.T), x.T)
    raise TypeError(f"cannot shift {type(x).__name__}")


# ---------------------------------------------------------------------------
# word polynomials

def _wp_mul(p1, p2):
    out = {}
    for w1, c1 in p1.items():
        for w2, c2 in p2.items():
            w = w1 + w2
            out[w] = out.get(w, Fraction(0)) + c1 * c2
    return {w: c for w, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def _expand_tree(alphabet, tree):
    if _is_leaf(alphabet, tree):
        return {(tree,): Fraction(1)}
    l = _expand_tree(alphabet, tree[0])
    r = _expand_tree(alphabet, tree[1])
    return lc_add(_wp_mul(l, r), (Fraction(-1), _wp_mul(r, l)))


def expand(x):
    """Word polynomial of a Commutator, LieElem, or {Commutator: coeff} dict."""
    if isinstance(x, Commutator):
        return dict(_expand_tree(x.alphabet, x.tree))
    if isinstance(x, LieElem):
        out = {}
        for w, c in x.coords.items():
            out = lc_add(out, (c, _expand_tree(x.alphabet, gamma_tree(x.alphabet, w))))
        return out
    if isinstance(x, dict):
        out = {}
        for t, c in x.items():
            out = lc_add(out, (c, expand(t)))
        return out
    raise TypeError(f"cannot expand {type(x).__name__}")


# ---------------------------------------------------------------------------
# Lyndon words

def _word_key(alphabet, w):
    return tuple(reversed([x if alphabet == "A" else (x,) for x in w]))


def is_lyndon(alphabet, w):
    if len(w) == 1:
        return True
    k = _word_key(alphabet, w)
    return all(k < _word_key(alphabet, w[s:] + w[:s]) for s in range(1, len(w)))


def _multidegree(md):
    if isinstance(md, dict):
        out = []
        for i, n in md.items():
            out += [i] * n
        return tuple(sorted(out))
    return tuple(sorted(md))


def all_words(alphabet, md, T=0):
    md = _multidegree(md)
    perms = sorted(set(itertools.permutations(md)))
    out = []
    if alphabet == "A":
        for p in perms:
            for ks in itertools.product(range(T), repeat=len(p)):
                out.append(tuple(zip(p, ks)))
    else:
        out = [tuple(p) for p in perms]
    out.sort(key=lambda w: _word_key(alphabet, w))
    return out


def lyndon_words(alphabet, md, T=0):
    return [w for w in all_words(alphabet, md, T) if is_lyndon(alphabet, w)]


def _longest_lyndon_prefix(alphabet, w, proper):
    top = len(w) - 1 if proper else len(w)
    for s in range(top, 0, -1):
        if is_lyndon(alphabet, w[:s]):
            return s
    raise ValueError(f"no Lyndon prefix in {w!r}")


def cfl(alphabet, w):
    """Factor a word into nondecreasing Lyndon factors."""
    out = []
    rest = tuple(w)
    while rest:
        s = _longest_lyndon_prefix(alphabet, rest, proper=False)
        out.append(rest[:s])
        rest = rest[s:]
    for u, v in zip(out, out[1:]):
        assert not _word_key(alphabet, v) < _word_key(alphabet, u)
    return tuple(out)


@lru_cache(maxsize=None)
def gamma_tree(alphabet, w):
    if len(w) == 1:
        return w[0]
    s = _longest_lyndon_prefix(alphabet, w, proper=True)
    u, v = w[:s], w[s:]
    assert is_lyndon(alphabet, v)
    return (gamma_tree(alphabet, u), gamma_tree(alphabet, v))


def gamma(alphabet, w, T=0):
    """Bracketing of a Lyndon word as a Commutator."""
    if not is_lyndon(alphabet, w):
        raise ValueError(f"{w!r} is not Lyndon")
    return Commutator(alphabet, gamma_tree(alphabet, w), T)


def lie_basis(alphabet, md, T=0):
    return [gamma(alphabet, w, T) for w in lyndon_words(alphabet, md, T)]


def lyndon_basis(alphabet, md, T=0):
    """PBW basis of the enveloping algebra in one multidegree.

    Returns one monomial per word: the tuple of bracketings of its
    nondecreasing Lyndon factors.
    """
    out = []
    for w in all_words(alphabet, md, T):
        out.append(tuple(gamma(alphabet, u, T) for u in cfl(alphabet, w)))
    return out


# ---------------------------------------------------------------------------
# Lyndon coordinates (exact solve against the gamma expansions)

@lru_cache(maxsize=None)
def _lyndon_solver(alphabet, md, T):
    solver = SpanSolver(lambda w: _word_key(alphabet, w))
    for w in lyndon_words(alphabet, md, T):
        ok = solver.add(_expand_tree(alphabet, gamma_tree(alphabet, w)), w)
        assert ok
    return solver


def lie_coords(poly, alphabet, T=0):
    """Lyndon-word coordinates of a Lie word polynomial."""
    if not poly:
        return {}
    groups = {}
    for w, c in poly.items():
        md = _multidegree([x[0] if alphabet == "A" else x for x in w])
        groups.setdefault(md, {})[w] = c
    out = {}
    for md, sub in groups.items():
        coords = _lyndon_solver(alphabet, md, T).solve(sub)
        if coords is None:
            raise ValueError("word polynomial is not in the Lie span")
        out.update(coords)
    return out


@dataclass
class LieElem:
    """Lie element in Lyndon normal form: {Lyndon word: coeff}."""

    alphabet: str
    coords: dict
    T: int = 0

    @staticmethod
    def from_commutator(c):
        return LieElem(c.alphabet, lie_coords(expand(c), c.alphabet, c.T), c.T)

    def terms(self):
        return [(c, gamma(self.alphabet, w, self.T)) for w, c in sorted(
            self.coords.items(), key=lambda t: _word_key(self.alphabet, t[0]))]

    def is_zero(self):
        return not self.coords

    def __add__(self, other):
        return LieElem(self.alphabet, lc_add(self.coords, other.coords), self.T)

    def __sub__(self, other):
        return LieElem(self.alphabet, lc_add(self.coords, (Fraction(-1), other.coords)), self.T)

    def __rmul__(self, c):
        return LieElem(self.alphabet, lc_scale(c, self.coords), self.T)

    def __eq__(self, other):
        return (self.alphabet, self.coords) == (other.alphabet, other.coords)

    def __repr__(self):
        if not self.coords:
            return "0"
        return " + ".join(f"({c})*{t}" for c, t in self.terms())


def _as_lie_pair(x):
    # (alphabet, T, word polynomial)
    if isinstance(x, Commutator):
        return x.alphabet, x.T, expand(x)
    if isinstance(x, LieElem):
        return x.alphabet, x.T, expand(x)
    if isinstance(x, dict):
        t0 = next(iter(x))
        return t0.alphabet, t0.T, expand(x)
    raise TypeError(f"not a Lie element: {type(x).__name__}")


def _is_bar_like(x):
    return isinstance(x, BarCommutator) or (
        isinstance(x, dict) and bool(x) and
        isinstance(next(iter(x)), BarCommutator))


def bracket(x, y):
    """Lie bracket in normal form; projected commutators go to a bar combo."""
    if _is_bar_like(x):
        return bracket_bar(x, y)
    ax, tx, px = _as_lie_pair(x)
    ay, ty, py = _as_lie_pair(y)
    if ax != ay or tx != ty:
        raise ValueError("mismatched alphabets")
    pc = lc_add(_wp_mul(px, py), (Fraction(-1), _wp_mul(py, px)))
    return LieElem(ax, lie_coords(pc, ax, tx), tx)


# ---------------------------------------------------------------------------
# projected commutators and the invariant subalgebra

@dataclass(frozen=True)
class BarCommutator:
    """Phase-orbit sum of a commutator, stored by a gauge-normalised tree."""

    tree: object
    T: int

    @staticmethod
    def make(tree, T):
        best = min((_tau_tree(tree, s, T) for s in range(T)),
                   key=lambda t: _tree_key("A", t))
        return BarCommutator(best, T)

    @property
    def degree(self):
        return len(_leaves("A", self.tree))

    @property
    def support(self):
        return _tree_content("A", self.tree)

    def rep(self):
        return Commutator("A", self.tree, self.T)

    def orbit_poly(self):
        out = {}
        for s in range(self.T):
            out = lc_add(out, _expand_tree("A", _tau_tree(self.tree, s, self.T)))
        return out

    def __str__(self):
        return f"bar({self.rep()})"

    __repr__ = __str__


def _bc_key(bc):
    return (bc.support, _tree_key("A", bc.tree))


def project_bar(x, T=None):
    """Orbit sum of a commutator (or termwise of a LieElem / combo)."""
    if isinstance(x, Commutator):
        return BarCommutator.make(x.tree, T or x.T)
    if isinstance(x, LieElem):
        out = {}
        for c, t in x.terms():
            bc = BarCommutator.make(t.tree, T or x.T)
            out = lc_add(out, {bc: c})
        return _bar_reexpand(out)
    if isinstance(x, dict):
        out = {}
        for t, c in x.items():
            out = lc_add(out, {BarCommutator.make(t.tree, T or t.T): c})
        return _bar_reexpand(out)
    raise TypeError(f"cannot project {type(x).__name__}")


@lru_cache(maxsize=None)
def _nbar_data(support, T):
    """Greedy basis of the invariant component plus its coordinate solver."""
    solver = SpanSolver(lambda w: _word_key("A", w))
    basis = []
    seen = set()
    for w in lyndon_words("A", support, T):
        bc = BarCommutator.make(gamma_tree("A", w), T)
        if bc in seen:
            continue
        seen.add(bc)
        if solver.add(bc.orbit_poly(), bc):
            basis.append(bc)
    n = len(support)
    if len(set(support)) == n:
        assert len(basis) == math.factorial(n - 1) * T ** (n - 1)
    return tuple(basis), solver


def nbar_basis(support, T):
    return _nbar_data(tuple(sorted(support)), T)[0]


def _bar_decompose(poly, support, T):
    """Coordinates of a Lie word polynomial over the basis orbit sums."""
    if not poly:
        return {}
    coords = _nbar_data(tuple(sorted(support)), T)[1].solve(poly)
    if coords is None:
        raise ValueError("not an invariant element")
    return coords


def _bar_reexpand(combo):
    # rewrite any {BarCommutator: coeff} dict over the canonical basis
    out = {}
    by_support = {}
    for bc, c in combo.items():
        by_support.setdefault(bc.support, []).append((bc, c))
    for support, items in by_support.items():
        poly = {}
        for bc, c in items:
            poly = lc_add(poly, (c, bc.orbit_poly()))
        out = lc_add(out, _bar_decompose(poly, support, items[0][0].T))
    return out


def bracket_bar(x, y):
    """Bracket of orbit sums: bar(x), bar(y) -> sum_s bar([tau^s x, y])."""
    xs = {x: Fraction(1)} if isinstance(x, BarCommutator) else dict(x)
    ys = {y: Fraction(1)} if isinstance(y, BarCommutator) else dict(y)
    out = {}
    for bx, cx in xs.items():
        for by, cy in ys.items():
            T = bx.T
            py = _expand_tree("A", by.tree)
            poly = {}
            for s in range(T):
                px = _expand_tree("A", _tau_tree(bx.tree, s, T))
                poly = lc_add(poly, _wp_mul(px, py), (Fraction(-1), _wp_mul(py, px)))
            bar_poly = {}
            for s in range(T):
                bar_poly = lc_add(bar_poly, {tuple((i, (k + s) % T) for i, k in w): c
                                             for w, c in poly.items()})
            support = tuple(sorted(bx.support + by.support))
            out = lc_add(out, (cx * cy, _bar_decompose(bar_poly, support, T)))
    return out


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def u_nbar_basis(support, T):
    """PBW monomials (tuples of basis orbit sums) spanning one weight of U(nbar)."""
    out = []
    for part in set_partitions(sorted(support)):
        for combo in itertools.product(*(nbar_basis(tuple(b), T) for b in part)):
            out.append(tuple(sorted(combo, key=_bc_key)))
    out.sort(key=lambda mono: tuple(_bc_key(b) for b in mono))
    return out


# ---------------------------------------------------------------------------
# generator-led peeling

class _AContext:
    def __init__(self, a, T):
        self.a, self.T = a, T

    def match(self, x, y):
        return x == y

    def hcoef(self, x, y):
        i, k = x
        j, l = y
        if i == j:
            return Fraction(0)
        return -_aw(self.a, Hyperplane.diag(i, j, l - k, self.T))

    def base(self, x, poly):
        return sum((c for w, c in poly.items() if w == (x,)), Fraction(0))


class _NContext:
    def __init__(self, B):
        self.B = B

    def match(self, x, y):
        return x == y

    def hcoef(self, x, y):
        return -Fraction(self.B[x - 1][y - 1])

    def base(self, x, poly):
        return sum((c for w, c in poly.items() if w == (x,)), Fraction(0))


def _ad_gen(ctx, letter, poly):
    """[phi(letter), poly] for a Lie polynomial; the Cartan tail must cancel."""
    out, trail = {}, {}
    for w, c in poly.items():
        for p, lp in enumerate(w):
            if ctx.match(letter, lp):
                rest = w[:p] + w[p + 1:]
                csum = sum((ctx.hcoef(letter, q) for q in w[p + 1:]), Fraction(0))
                out[rest] = out.get(rest, Fraction(0)) + c * csum
                trail[rest] = trail.get(rest, Fraction(0)) + c
    if any(v != 0 for v in trail.values()):
        raise ValueError("Cartan terms did not cancel; input was not Lie")
    return {w: c for w, c in out.items() if c != 0}


def _ad_tree(ctx, tree, poly, alphabet="A"):
    if _is_leaf(alphabet, tree):
        return _ad_gen(ctx, tree, poly)
    l, r = tree
    return lc_add(_ad_tree(ctx, l, _ad_tree(ctx, r, poly, alphabet), alphabet),
                  (Fraction(-1), _ad_tree(ctx, r, _ad_tree(ctx, l, poly, alphabet), alphabet)))


def _gen_led(alphabet, tree):
    """Rewrite a tree as a combination of trees whose left factor is a letter."""
    if _is_leaf(alphabet, tree):
        return {tree: Fraction(1)}
    l, r = tree
    if _is_leaf(alphabet, l):
        return {(l, t): c for t, c in _gen_led(alphabet, r).items()}
    p, q = l
    return lc_add(_gen_led(alphabet, (p, (q, r))),
                  (Fraction(-1), _gen_led(alphabet, (q, (p, r)))))


def _s_tree(ctx, alphabet, tree, poly):
    if _is_leaf(alphabet, tree):
        return ctx.base(tree, poly)
    x, rest = tree  # x is a letter after the generator-led rewrite
    return _s_tree(ctx, alphabet, rest, _ad_gen(ctx, x, poly))


def _peel_form(ctx, alphabet, xpoly_trees, ypoly):
    out = Fraction(0)
    for tree, c in xpoly_trees.items():
        d = len(_leaves(alphabet, tree))
        ysub = {w: cw for w, cw in ypoly.items() if len(w) == d}
        if not ysub:
            continue
        for t2, c2 in _gen_led(alphabet, tree).items():
            out += c * c2 * _s_tree(ctx, alphabet, t2, ysub)
    return out


def _tree_combo(x):
    # {tree: coeff} of a Commutator / LieElem / {Commutator: coeff}
    if isinstance(x, Commutator):
        return x.alphabet, x.T, {x.tree: Fraction(1)}
    if isinstance(x, LieElem):
        out = {}
        for c, t in x.terms():
            out = lc_add(out, {t.tree: c})
        return x.alphabet, x.T, out
    if isinstance(x, dict):
        t0 = next(iter(x))
        out = {}
        for t, c in x.items():
            out = lc_add(out, {t.tree: c})
        return t0.alphabet, t0.T, out
    raise TypeError(f"not a Lie element: {type(x).__name__}")


def shapovalov_a(x, y, a):
    """Contravariant form on the A-alphabet Lie algebra or its orbit sums.

    Plain inputs pair letters by exact label; projected inputs use one
    representative on the left against the full orbit sum on the right,
    which multiplies the form by T.
    """
    if _is_bar_like(x):
        xs = {x: Fraction(1)} if isinstance(x, BarCommutator) else x
        ys = {y: Fraction(1)} if isinstance(y, BarCommutator) else y
        out = Fraction(0)
        for bx, cx in xs.items():
            for by, cy in ys.items():
                if bx.support != by.support:
                    continue
                ctx = _AContext(a, bx.T)
                ypoly = {}
                for s in range(bx.T):
                    ypoly = lc_add(ypoly, _expand_tree("A", _tau_tree(by.tree, s, bx.T)))
                out += cx * cy * bx.T * _peel_form(ctx, "A", {bx.tree: Fraction(1)}, ypoly)
        return out
    ax, tx, xtrees = _tree_combo(x)
    ay, ty, _ = _tree_combo(y)
    assert ax == ay == "A" and tx == ty
    return _peel_form(_AContext(a, tx), "A", xtrees, expand(y))


def direct_shapovalov_n(x, y, B):
    """Contravariant form on the N alphabet from a symmetric Cartan-type matrix.

    Every Cartan commutation uses -B[i][j], including i == j, so this route
    never references the weighting and serves as an independent cross-check.
    """
    ax, _, xtrees = _tree_combo(x)
    ay, _, _ = _tree_combo(y)
    assert ax == ay == "N"
    return _peel_form(_NContext(B), "N", xtrees, expand(y))


# ---------------------------------------------------------------------------
# evaluation-slot actions and forms

def e_action(gen, x, a, slot):
    """Raising letter on a slot vector {word: coeff}; the Cartan channel is
    folded into scalars (commutations give diagonal weights, the vacuum its
    marked-point eigenvalue).  Letters the word does not contain act as zero.
    """
    if isinstance(gen, Commutator):
        letter, T = gen.tree, gen.T
    else:
        raise TypeError("gen must be a degree-1 Commutator")
    if not _is_leaf("A", letter):
        raise ValueError("gen must be a single generator")
    if isinstance(x, tuple):
        x = {x: Fraction(1)}
    i, k = letter
    ctx = _AContext(a, T)
    eig = -_aw(a, Hyperplane.point(i, slot, -k, T))
    out = {}
    for w, c in x.items():
        for p, lp in enumerate(w):
            if lp == letter:
                rest = w[:p] + w[p + 1:]
                csum = sum((ctx.hcoef(letter, q) for q in w[p + 1:]), Fraction(0))
                out[rest] = out.get(rest, Fraction(0)) + c * (csum + eig)
    return {w: c for w, c in out.items() if c != 0}


def slot_form(xc, yc, slot, a, T):
    """Form on one evaluation slot; xc, yc are tuples of bracket trees."""
    def content_poly(content):
        poly = {(): Fraction(1)}
        for f in content:
            poly = _wp_mul(poly, _expand_tree("A", f.tree))
        return poly

    def rec(word, ypoly):
        if not word:
            return ypoly.get((), Fraction(0))
        head = word[0]
        y2 = e_action(Commutator("A", head, T), ypoly, a, slot)
        return rec(word[1:], y2)

    ypoly = content_poly(yc)
    out = Fraction(0)
    for w, c in content_poly(xc).items():
        out += c * rec(w, ypoly)
    return out


# --- slot 0, at the level of projected commutators ---

def _orbit_weight_sum(a, i, j, T):
    return sum((_aw(a, Hyperplane.diag(i, j, k, T)) for k in range(T)), Fraction(0))


def _h_eig0(i, rest_support, a, T):
    out = -_aw(a, Hyperplane.zero(i))
    for j in rest_support:
        out -= _orbit_weight_sum(a, i, j, T)
    return out


def _sub_multiset(small, big):
    cb = Counter(big)
    return all(cb[k] >= v for k, v in Counter(small).items())


def _lowering(pbar, ybar, a):
    """[phi(bar p), bar y] for support(p) strictly inside support(y).

    phi of a tree is the mirrored tree with raised letters, so the adjoint
    action runs over the mirrored structure with no extra sign.
    """
    T = pbar.T
    ctx = _AContext(a, T)
    ypoly = _expand_tree("A", ybar.tree)
    poly = {}
    for s in range(T):
        et = _mirror("A", _tau_tree(pbar.tree, s, T))
        poly = lc_add(poly, _ad_tree(ctx, et, ypoly))
    bar_poly = {}
    for s in range(T):
        bar_poly = lc_add(bar_poly, {tuple((i, (k + s) % T) for i, k in w): c
                                     for w, c in poly.items()})
    support = tuple(sorted((Counter(ybar.support) - Counter(pbar.support)).elements()))
    return _bar_decompose(bar_poly, support, T)


def slot0_action(pbar, word, a, central=None):
    """phi(bar p) acting on a slot-0 word (tuple of projected commutators).

    Equal supports collapse to the Cartan orbit sums with coefficient
    S_a(bar p, y)/T (plus central(bar p, y) if a central channel is given);
    strictly larger supports lower into the word; strictly smaller supports
    turn the raising element around and recurse; anything else is zero.
    """
    if not word:
        return {}
    T = pbar.T
    y1, rest = word[0], word[1:]
    sp, s1 = pbar.support, y1.support
    out = {}
    if sp == s1:
        coeff = shapovalov_a(pbar, y1, a) / T
        if coeff:
            rest_support = [i for b in rest for i in b.support]
            heig = sum((_h_eig0(i, rest_support, a, T) for i in sorted(set(sp))),
                       Fraction(0))
            out = lc_add(out, {rest: coeff * heig})
        if central is not None:
            c = central(pbar, y1)
            if c:
                out = lc_add(out, {rest: c})
    elif _sub_multiset(sp, s1):
        for bc, c in _lowering(pbar, y1, a).items():
            out = lc_add(out, {(bc,) + rest: c})
    elif _sub_multiset(s1, sp):
        for bc, c in _lowering(y1, pbar, a).items():
            out = lc_add(out, (c, slot0_action(bc, rest, a, central)))
    for w2, c in slot0_action(pbar, rest, a, central).items():
        out = lc_add(out, {(y1,) + w2: c})
    return out


def slot0_form(xw, yw, a, central=None):
    """Slot-0 form; xw, yw are words of projected commutators (or dicts).

    Without a central channel this is the plain vacuum-module form; passing
    central(x, y) adds the central charge of the modified bracket whenever a
    raising orbit sum meets a factor of equal support.
    """
    if isinstance(xw, tuple):
        xw = {xw: Fraction(1)}
    if isinstance(yw, tuple):
        yw = {yw: Fraction(1)}

    def rec(word, yvec):
        if not word:
            return yvec.get((), Fraction(0))
        head, rest = word[0], word[1:]
        acted = {}
        for w2, c in yvec.items():
            acted = lc_add(acted, (c, slot0_action(head, w2, a, central)))
        if not acted:
            return Fraction(0)
        return rec(rest, acted)

    out = Fraction(0)
    for w, c in xw.items():
        out += c * rec(w, yw)
    return out


# ---------------------------------------------------------------------------
# chains

@dataclass(frozen=True)
class ModMonomial:
    """Module monomial: slot-0 word of projected commutators, then one word
    of bracket trees per marked point."""

    slot0: tuple
    slots: tuple = ()

    def __str__(self):
        parts = ["".join(str(b) for b in self.slot0) + "v0"]
        for j, content in enumerate(self.slots, start=1):
            parts.append("".join(str(f) for f in content) + f"v{j}")
        return "(" + " | ".join(parts) + ")"

    __repr__ = __str__


def _perm_sign_sort(factors):
    # stable sort with the sign of the permutation; duplicate factors kill the term
    keyed = sorted(range(len(factors)), key=lambda i: _bc_key(factors[i]))
    sorted_f = tuple(factors[i] for i in keyed)
    for b1, b2 in zip(sorted_f, sorted_f[1:]):
        if b1 == b2:
            return sorted_f, 0
    inv = sum(1 for i in range(len(keyed)) for j in range(i + 1, len(keyed))
              if keyed[i] > keyed[j])
    return sorted_f, (-1) ** inv


class ChainElem:
    """Combination of (wedge of projected commutators) x (module monomial).

    The wedge is stored sorted; building from any display order folds the
    permutation sign in.  The stored left-to-right order is the display
    order: the rightmost factor acts first.
    """

    def __init__(self, terms=None):
        self.terms = dict(terms or {})

    @staticmethod
    def unit(wedge, mono, coeff=Fraction(1)):
        wedge = tuple(wedge)
        sorted_w, sign = _perm_sign_sort(wedge)
        if sign == 0 or coeff == 0:
            return ChainElem()
        return ChainElem({(sorted_w, mono): Fraction(coeff) * sign})

    def __add__(self, other):
        return ChainElem(lc_add(self.terms, other.terms))

    def __sub__(self, other):
        return ChainElem(lc_add(self.terms, (Fraction(-1), other.terms)))

    def __rmul__(self, c):
        return ChainElem(lc_scale(c, self.terms))

    def __eq__(self, other):
        return self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (w, mono), c in sorted(self.terms.items(), key=lambda t: repr(t[0])):
            ws = "^".join(str(b) for b in w) if w else "1"
            bits.append(f"({c})*{ws}*{mono}")
        return " + ".join(bits)


def _straighten0(word):
    """Rewrite a product of bar factors over sorted PBW monomials."""
    out = {}
    stack = [(tuple(word), Fraction(1))]
    while stack:
        w, c = stack.pop()
        for p in range(len(w) - 1):
            if _bc_key(w[p]) > _bc_key(w[p + 1]):
                stack.append((w[:p] + (w[p + 1], w[p]) + w[p + 2:], c))
                for bc2, c2 in bracket_bar(w[p], w[p + 1]).items():
                    stack.append((w[:p] + (bc2,) + w[p + 2:], c * c2))
                break
        else:
            out[w] = out.get(w, Fraction(0)) + c
    return {w: c for w, c in out.items() if c != 0}


def act_nbar(bc, mono):
    """Orbit sum acting on a module monomial, one slot at a time.

    The result is canonical: the slot-0 word is straightened into sorted
    PBW monomials and the slot-j prepends are expanded into letter words.
    """
    out = {}
    for w0, c0 in _straighten0((bc,) + mono.slot0).items():
        key = ModMonomial(w0, mono.slots)
        out[key] = out.get(key, Fraction(0)) + c0
    T = bc.T
    for j, content in enumerate(mono.slots):
        for s in range(T):
            for word, cw in _expand_tree("A", _tau_tree(bc.tree, s, T)).items():
                letters = tuple(Commutator("A", l, T) for l in word) + content
                slots = mono.slots[:j] + (letters,) + mono.slots[j + 1:]
                key = ModMonomial(mono.slot0, slots)
                out[key] = out.get(key, Fraction(0)) + cw
    return {k: c for k, c in out.items() if c != 0}


def canonical_monomial(slot0, slots, T):
    """Canonical {ModMonomial: coeff} for arbitrary factor orders, with
    bracket trees allowed in the evaluation slots."""
    expanded = []
    for content in slots:
        poly = {(): Fraction(1)}
        for f in content:
            poly = _wp_mul(poly, _expand_tree("A", f.tree))
        expanded.append(poly)
    out = {}
    for w0, c0 in _straighten0(tuple(slot0)).items():
        for combo in itertools.product(*(p.items() for p in expanded)):
            slots2 = tuple(tuple(Commutator("A", l, T) for l in w) for w, _ in combo)
            c = c0
            for _, cw in combo:
                c = c * cw
            key = ModMonomial(w0, slots2)
            out[key] = out.get(key, Fraction(0)) + c
    return {k: v for k, v in out.items() if v != 0}


def chain_differential(x):
    """Boundary map: act with each wedge factor, bracket each pair."""
    out = ChainElem()
    for (w, mono), c in x.terms.items():
        k = len(w)
        for i in range(1, k + 1):  # 1-indexed from the right
            pos = k - i
            sign = Fraction((-1) ** (i - 1))
            rest = w[:pos] + w[pos + 1:]
            for mono2, c2 in act_nbar(w[pos], mono).items():
                out = out + ChainElem.unit(rest, mono2, c * sign * c2)
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                sign = Fraction((-1) ** (i + j))
                pi, pj = k - i, k - j
                rest = tuple(b for p, b in enumerate(w) if p not in (pi, pj))
                for bc, c2 in bracket_bar(w[pj], w[pi]).items():
                    out = out + ChainElem.unit(rest + (bc,), mono, c * sign * c2)
    return out


def _det(M):
    n = len(M)
    if n == 0:
        return Fraction(1)
    M = [row[:] for row in M]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] * inv
            if f:
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return det


def _mono_profile(w, mono):
    wedge_supports = tuple(sorted(b.support for b in w))
    s0 = tuple(sorted(itertools.chain.from_iterable(b.support for b in mono.slot0)))
    slots = tuple(tuple(sorted(itertools.chain.from_iterable(f.content for f in c)))
                  for c in mono.slots)
    return wedge_supports, s0, slots


def shapovalov_chain(x, y, a, slot0_form=None, cache=None):
    """Form on chains: wedge determinant times the slot forms.

    slot0_form(xw, yw) may be supplied to replace the plain slot-0 form (for
    instance with a centrally corrected one); it receives the two slot-0
    words.  A shared dict may be passed as cache when computing Gram blocks.
    """
    plain = _slot0_form_plain
    if cache is None:
        cache = {}

    def sa(bx, by):
        key = ("sa", bx, by)
        if key not in cache:
            cache[key] = shapovalov_a(bx, by, a)
        return cache[key]

    def s0(x0, y0):
        key = ("s0", x0, y0)
        if key not in cache:
            if slot0_form is not None:
                cache[key] = slot0_form(x0, y0)
            else:
                cache[key] = plain(x0, y0, a)
        return cache[key]

    def si(j, xc, yc, T):
        key = ("si", j, xc, yc)
        if key not in cache:
            cache[key] = slot_form(xc, yc, j, a, T)
        return cache[key]

    out = Fraction(0)
    for (wx, mx), cx in x.terms.items():
        px = _mono_profile(wx, mx)
        for (wy, my), cy in y.terms.items():
            if _mono_profile(wy, my) != px:
                continue
            T = None
            for b in wx + mx.slot0:
                T = b.T
                break
            if T is None:
                for content in mx.slots:
                    for f in content:
                        T = f.T
                        break
            val = _det([[sa(bx, by) for by in wy] for bx in wx])
            if val == 0:
                continue
            val *= s0(mx.slot0, my.slot0)
            if val == 0:
                continue
            for j, (xc, yc) in enumerate(zip(mx.slots, my.slots), start=1):
                val *= si(j, xc, yc, T)
                if val == 0:
                    break
            out += cx * cy * val
    return out


_slot0_form_plain = slot0_form


def chain_basis(m, N, T, p):
    """Basis of the degree-p chains in the weight where every coordinate of
    1..m appears exactly once, as unit ChainElems."""
    out = []
    coords = list(range(1, m + 1))
    for labels in itertools.product(range(N + 2), repeat=m):
        # label 0: wedge part, 1: slot 0, j+1: marked point j
        wset = [c for c, l in zip(coords, labels) if l == 0]
        s0set = [c for c, l in zip(coords, labels) if l == 1]
        slotsets = [[c for c, l in zip(coords, labels) if l == j + 2] for j in range(N)]
        parts = [q for q in set_partitions(wset) if len(q) == p]
        if not parts:
            continue
        slot_words = []
        for sj in slotsets:
            words = []
            for perm in itertools.permutations(sj):
                for ks in itertools.product(range(T), repeat=len(sj)):
                    words.append(tuple(gen_a(i, k, T) for i, k in zip(perm, ks)))
            slot_words.append(words or [()])
        for part in parts:
            blocks = [nbar_basis(tuple(b), T) for b in part]
            for wedge in itertools.product(*blocks):
                for mono0 in (u_nbar_basis(tuple(s0set), T) if s0set else [()]):
                    for slots in itertools.product(*slot_words):
                        mono = ModMonomial(mono0, tuple(slots))
                        out.append(ChainElem.unit(tuple(sorted(wedge, key=_bc_key)), mono))
    out.sort(key=lambda ce: repr(ce))
    return out


__all__ = [
    "MissingWeight", "Commutator", "GenA", "GenN", "gen_a", "gen_n", "tau",
    "expand", "is_lyndon", "all_words", "lyndon_words", "cfl", "gamma",
    "lie_basis", "lyndon_basis", "lie_coords", "LieElem", "bracket",
    "BarCommutator", "project_bar", "nbar_basis", "u_nbar_basis",
    "bracket_bar", "set_partitions", "shapovalov_a", "direct_shapovalov_n",
    "e_action", "slot_form", "slot0_action", "slot0_form", "ModMonomial",
    "ChainElem", "act_nbar", "canonical_monomial", "chain_differential",
    "shapovalov_chain", "chain_basis",
]
