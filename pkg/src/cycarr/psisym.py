"""Flag transport for chain monomials, and wreath-product symmetrization.

psi sends a wedge-times-module monomial to a signed flag by unwinding the
monomial one factor at a time: the leftmost slot-0 factor zeroes out its
coordinates, the leftmost factor of an evaluation slot anchors its coordinate
to the marked point, and a bracket factor of the wedge ties its coordinates
into one swimming island.  psi_inv rebuilds the monomial from a flag by
classifying each step (new anchor link, new zero link, or new diagonal link)
and undoing the corresponding move.

The second half implements the wreath product that permutes coordinates
within a block and shifts their phases by multiples of the block's orbit
length.  It acts on letters, chains, hyperplanes, edges, flags and forms;
sym_s and pi translate between the block-letter side and the phased side and
compose to group_order(sym) times the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm

from ._lin import SpanSolver, lc_add, lc_scale
from .arrangement import (EMPTY, ArrangementSpec, Edge, FlagPath, Hyperplane,
                          _edge_constraints, _merge, intersect,
                          intersect_hyperplane)
from .flagspace import FlagVector, FormVector, normalize_flag
from .freelie import (BarCommutator, ChainElem, Commutator, LieElem,
                      ModMonomial, _bar_reexpand, _expand_tree, _is_leaf,
                      _leaves, _perm_sign_sort, _tau_tree, _word_key, _wp_mul,
                      canonical_monomial, expand, gamma_tree, lie_coords,
                      u_nbar_basis)
from .scalars import Cyc


class WrongWeight(ValueError):
    """A chain term uses some coordinate more than once, or out of range."""


class RepeatedIndex(ValueError):
    """A commutator repeats a coordinate, so it has no attached edge."""


class WeightMismatch(ValueError):
    """Input block weight does not fit the requested target support."""


class NotInvariant(ValueError):
    """pi requires a chain fixed by the whole wreath product."""


# ---------------------------------------------------------------------------
# edges attached to commutators

def _tree_support(tree):
    return sorted(i for i, _ in _leaves("A", tree))


def _edge_of_tree(tree, m, T, anchor):
    content = _leaves("A", tree)
    if anchor == "swim":
        i0, k0 = content[0]
        cons = [("tt", i0, i, (k - k0) % T) for i, k in content[1:]]
    elif anchor == 0:
        cons = [("t0", i) for i, _ in content]
    else:
        cons = [("tz", i, anchor, k % T) for i, k in content]
    return _merge(m, T, cons)


def edge_of_commutator(g, m, anchor="swim"):
    """The edge tying g's coordinates together: into one swimming island,
    onto the marked point z_anchor, or onto zero."""
    support = _tree_support(g.tree)
    if len(set(support)) != len(support):
        raise RepeatedIndex(f"repeated coordinate in {g}")
    return _edge_of_tree(g.tree, m, g.T, anchor)


# ---------------------------------------------------------------------------
# psi: chain monomial -> signed flag

def _psi_mono(wedge, slot0, slots, m, T):
    """Signed flag of a display state (wedge of bars, slot words)."""
    if slot0:
        b = slot0[0]
        sign, flag = _psi_mono(wedge + (b,), slot0[1:], slots, m, T)
        L = intersect(flag.deepest, _edge_of_tree(b.tree, m, T, 0))
        return sign, flag.extend(L)
    for j, word in enumerate(slots, start=1):
        if word:
            g = word[0]
            i, k = g.tree
            rest = slots[:j - 1] + (word[1:],) + slots[j:]
            b = BarCommutator.make(g.tree, T)
            sign, flag = _psi_mono(wedge + (b,), slot0, rest, m, T)
            L = intersect_hyperplane(flag.deepest, Hyperplane.point(i, j, -k, T))
            return sign, flag.extend(L)
    for idx in range(len(wedge) - 1, -1, -1):
        tree = wedge[idx].tree
        if not _is_leaf("A", tree):
            left, right = tree
            move_sign = (-1) ** (len(wedge) - 1 - idx)
            split = wedge[:idx] + wedge[idx + 1:] + (
                BarCommutator.make(right, T), BarCommutator.make(left, T))
            sign, flag = _psi_mono(split, slot0, slots, m, T)
            L = intersect(flag.deepest, _edge_of_tree(tree, m, T, "swim"))
            return sign * move_sign, flag.extend(L)
    coords = [b.tree[0] for b in wedge]
    inv = sum(1 for a in range(len(coords)) for b in range(a + 1, len(coords))
              if coords[a] > coords[b])
    return (-1) ** inv, FlagPath(m, T, ())


def _term_support(wedge, mono):
    support = []
    for b in wedge:
        support += _tree_support(b.tree)
    for b in mono.slot0:
        support += _tree_support(b.tree)
    for word in mono.slots:
        support += [f.tree[0] for f in word]
    return support


def psi(u, spec: ArrangementSpec, normalize=True) -> FlagVector:
    """Signed-flag image of a chain element whose coordinates are all
    distinct.  With normalize=True the result is expressed in the preferred
    flag basis of the arrangement."""
    terms = u.terms if isinstance(u, ChainElem) else dict(u)
    out = {}
    for (wedge, mono), c in terms.items():
        support = _term_support(wedge, mono)
        if len(set(support)) != len(support):
            raise WrongWeight(f"repeated coordinate in {support}")
        if support and max(support) > spec.m:
            raise WrongWeight(f"coordinate out of range in {support}")
        if len(mono.slots) > spec.N:
            raise WrongWeight(f"term uses {len(mono.slots)} marked points, "
                              f"arrangement has {spec.N}")
        slots = mono.slots + ((),) * (spec.N - len(mono.slots))
        sign, flag = _psi_mono(wedge, mono.slot0, slots, spec.m, spec.T)
        out[flag] = out.get(flag, Fraction(0)) + sign * c
    v = FlagVector({f: c for f, c in out.items() if c})
    return normalize_flag(v, spec) if normalize else v


# ---------------------------------------------------------------------------
# psi_inv: flag -> chain element

def _anchored(L):
    if L.is_empty():
        return {}
    return {j: dict(pairs) for j, pairs in L.fixed}


def _swim_islands(L):
    """coordinate -> (island id, phase), swimming islands only."""
    out = {}
    for isl in sorted(L.swim):
        root = isl[0][0]
        for c, p in isl:
            out[c] = (root, p)
    return out


def _pop_sign(seq, idx):
    # sign picked up moving entry idx to the right end
    return (-1) ** (len(seq) - 1 - idx)


def _find_factor(wedge, coord):
    for idx, tree in enumerate(wedge):
        if coord in _tree_support(tree):
            return idx
    raise ValueError(f"no wedge factor holds coordinate {coord}")


def _gauge_at(tree, coord, T):
    """Shift the tree so the letter on the given coordinate has phase 0."""
    phase = next(k for i, k in _leaves("A", tree) if i == coord)
    return _tau_tree(tree, -phase % T, T)


def _undo_step(state, prev, new, T):
    sign, wedge, slot0, slots = state

    prev_fixed = _anchored(prev)
    for j, pairs in sorted(_anchored(new).items()):
        fresh = sorted(set(pairs) - set(prev_fixed.get(j, {})))
        if fresh:
            i = fresh[0]
            r = pairs[i]  # w^r t_i = z_j on the new edge
            idx = _find_factor(wedge, i)
            sign *= _pop_sign(wedge, idx)
            tree = _gauge_at(wedge.pop(idx), i, T)
            slots[j - 1].insert(0, _tau_tree(tree, r % T, T))
            return (sign, wedge, slot0, slots)

    fresh_zero = sorted(new.zero - prev.zero)
    if fresh_zero:
        idx = _find_factor(wedge, fresh_zero[0])
        sign *= _pop_sign(wedge, idx)
        slot0.insert(0, wedge.pop(idx))
        return (sign, wedge, slot0, slots)

    islands = _swim_islands(new)
    supports = [_tree_support(t) for t in wedge]
    pair = None
    for ia, ib in itertools.combinations(range(len(wedge)), 2):
        ca, cb = supports[ia][0], supports[ib][0]
        if ca in islands and cb in islands and islands[ca][0] == islands[cb][0]:
            pair = (ia, ib)
            break
    if pair is None:
        raise ValueError("flag step adds no anchor, zero, or diagonal link")
    ia, ib = pair
    i = min(supports[ia][0], supports[ib][0])
    if i in supports[ib]:
        ia, ib = ib, ia  # the factor holding the smaller coordinate acts first
    j = supports[ib][0]
    k = (islands[j][1] - islands[i][1]) % T  # t_i = w^k t_j on the new edge
    order = [x for x in range(len(wedge)) if x not in (ia, ib)] + [ia, ib]
    inv = sum(1 for a in range(len(order)) for b in range(a + 1, len(order))
              if order[a] > order[b])
    sign *= (-1) ** inv
    g2 = _gauge_at(wedge[ia], i, T)
    g1 = _gauge_at(wedge[ib], j, T)
    wedge = [wedge[x] for x in order[:-2]]
    wedge.append((_tau_tree(g1, k, T), g2))
    return (sign, wedge, slot0, slots)


def _bar_combo(tree, T):
    """The projected commutator of a tree, over the canonical basis."""
    return _bar_reexpand({BarCommutator.make(tree, T): Fraction(1)})


def _chain_from_parts(wedge_dicts, slot0_dicts, slots, T, coeff) -> ChainElem:
    """Multilinear assembly of a chain from per-factor bar combinations."""
    out = ChainElem()
    for wcombo in itertools.product(*(d.items() for d in wedge_dicts)):
        cw = coeff
        for _, cb in wcombo:
            cw *= cb
        bars = tuple(b for b, _ in wcombo)
        for scombo in itertools.product(*(d.items() for d in slot0_dicts)):
            c0 = cw
            for _, cb in scombo:
                c0 *= cb
            s0 = tuple(b for b, _ in scombo)
            for mono, cm in canonical_monomial(s0, slots, T).items():
                out = out + ChainElem.unit(bars, mono, c0 * cm)
    return out


def _psi_inv_flag(F: FlagPath, spec: ArrangementSpec, support) -> ChainElem:
    T = spec.T
    state = (1, [(i, 0) for i in support], [], [[] for _ in range(spec.N)])
    prev = Edge.full(spec.m, T)
    for L in F.steps:
        state = _undo_step(state, prev, L, T)
        prev = L
    sign, wedge, slot0, slots = state
    slots = tuple(tuple(Commutator("A", t, T) for t in word) for word in slots)
    return _chain_from_parts([_bar_combo(t, T) for t in wedge],
                             [_bar_combo(t, T) for t in slot0],
                             slots, T, Fraction(sign))


def psi_inv(F, spec: ArrangementSpec, support=None) -> ChainElem:
    """Chain element of a flag (or flag vector), rebuilt step by step.

    The support lists the coordinates the flag may constrain; it defaults to
    all of them.  Unconstrained coordinates come back as single-letter wedge
    factors."""
    support = sorted(support) if support is not None else list(range(1, spec.m + 1))
    if isinstance(F, FlagPath):
        return _psi_inv_flag(F, spec, support)
    out = ChainElem()
    for flag, c in F.items():
        out = out + c * _psi_inv_flag(flag, spec, support)
    return out


# ---------------------------------------------------------------------------
# block data for the wreath product

@dataclass(frozen=True)
class OrbitData:
    """A permutation of the block letters, split into cycles.

    sigma[u-1] is the image of letter u.  Block i has representative
    iota[i-1] and length lengths[i-1]; T is the order of the permutation."""

    sigma: tuple
    iota: tuple
    lengths: tuple
    T: int

    @staticmethod
    def build(sigma, iota=None) -> "OrbitData":
        sigma = tuple(sigma)
        R = len(sigma)
        if sorted(sigma) != list(range(1, R + 1)):
            raise ValueError(f"not a permutation of 1..{R}: {sigma}")
        cycles = []
        seen = set()
        for u in range(1, R + 1):
            if u in seen:
                continue
            cyc = [u]
            seen.add(u)
            v = sigma[u - 1]
            while v != u:
                cyc.append(v)
                seen.add(v)
                v = sigma[v - 1]
            cycles.append(cyc)
        if iota is None:
            iota = tuple(min(c) for c in sorted(cycles, key=min))
        else:
            iota = tuple(iota)
            hit = [next((n for n, c in enumerate(cycles) if u in c), None)
                   for u in iota]
            if len(iota) != len(cycles) or sorted(hit) != list(range(len(cycles))):
                raise ValueError("iota must pick one representative per cycle")
        lengths = tuple(len(next(c for c in cycles if u in c)) for u in iota)
        return OrbitData(sigma, iota, lengths, lcm(*lengths))

    @property
    def R(self):
        return len(self.sigma)

    @property
    def r(self):
        return len(self.iota)

    def power(self, u, k):
        for _ in range(k % self.T):
            u = self.sigma[u - 1]
        return u

    def decompose(self, u):
        """(block index, exponent) with u the exponent-th image of the
        block representative."""
        for i, rep in enumerate(self.iota, start=1):
            v = rep
            for k in range(self.lengths[i - 1]):
                if v == u:
                    return i, k
                v = self.sigma[v - 1]
        raise ValueError(f"letter {u} out of range")


@dataclass(frozen=True)
class WeightLambda:
    """How many coordinates each block gets; fixes the numbering
    coord(i, n) = lam_1 + ... + lam_{i-1} + n."""

    lam: tuple

    @property
    def m(self):
        return sum(self.lam)

    def coord(self, i, n):
        if not 1 <= n <= self.lam[i - 1]:
            raise ValueError(f"position {n} out of block {i}")
        return sum(self.lam[:i - 1]) + n

    def block_of(self, c):
        start = 0
        for i, l in enumerate(self.lam, start=1):
            if start < c <= start + l:
                return i, c - start
            start += l
        raise ValueError(f"coordinate {c} out of range")


@dataclass(frozen=True)
class SymData:
    """Orbit data plus a weight: the setting every group action lives in."""

    orbit: OrbitData
    weight: WeightLambda
    N: int = 0

    def __post_init__(self):
        if len(self.weight.lam) != self.orbit.r:
            raise ValueError("one weight entry per block required")

    @staticmethod
    def build(sigma, lam, N=0, iota=None) -> "SymData":
        return SymData(OrbitData.build(sigma, iota), WeightLambda(tuple(lam)), N)

    @property
    def T(self):
        return self.orbit.T

    @property
    def m(self):
        return self.weight.m

    def phase_mod(self, i):
        return self.T // self.orbit.lengths[i - 1]


@dataclass(frozen=True)
class GroupElem:
    """One permutation of {1..lam_i} and one phase vector per block."""

    perms: tuple
    gauges: tuple


def identity_elem(sym: SymData) -> GroupElem:
    return GroupElem(tuple(tuple(range(1, l + 1)) for l in sym.weight.lam),
                     tuple((0,) * l for l in sym.weight.lam))


def compose(sym: SymData, g2: GroupElem, g1: GroupElem) -> GroupElem:
    """The element acting as g1 first, then g2."""
    perms, gauges = [], []
    for i in range(sym.orbit.r):
        s1, s2 = g1.perms[i], g2.perms[i]
        k1, k2 = g1.gauges[i], g2.gauges[i]
        mod = sym.phase_mod(i + 1)
        perms.append(tuple(s2[s1[p] - 1] for p in range(len(s1))))
        gauges.append(tuple((k1[n] + k2[s1[n] - 1]) % mod for n in range(len(k1))))
    return GroupElem(tuple(perms), tuple(gauges))


def group_order(sym: SymData) -> int:
    out = 1
    for i, l in enumerate(sym.weight.lam, start=1):
        out *= sym.phase_mod(i) ** l * factorial(l)
    return out


def group_elements(sym: SymData):
    """All elements, block by block."""
    per_block = []
    for i, l in enumerate(sym.weight.lam, start=1):
        mod = sym.phase_mod(i)
        per_block.append([(s, ks)
                          for s in itertools.permutations(range(1, l + 1))
                          for ks in itertools.product(range(mod), repeat=l)])
    for combo in itertools.product(*per_block):
        yield GroupElem(tuple(s for s, _ in combo), tuple(ks for _, ks in combo))


def _perm_sign(images) -> int:
    inv = sum(1 for a in range(len(images)) for b in range(a + 1, len(images))
              if images[a] > images[b])
    return (-1) ** inv


def sign_of(g: GroupElem) -> int:
    sign = 1
    for s in g.perms:
        sign *= _perm_sign(s)
    return sign


def character_chi(sym: SymData, g: GroupElem) -> Cyc:
    """Product over blocks of the phase character: the root of unity with
    exponent (block length) times (sum of the block's phases)."""
    e = sum(sym.orbit.lengths[i] * sum(g.gauges[i]) for i in range(sym.orbit.r))
    return Cyc.root(sym.T, e % sym.T)


def jacobian(sym: SymData, g: GroupElem) -> Cyc:
    return character_chi(sym, g) * sign_of(g)


# ---------------------------------------------------------------------------
# the group action

def _coord_maps(sym: SymData, g: GroupElem):
    """coordinate -> image coordinate, and coordinate -> phase shift."""
    perm, delta = {}, {}
    for i in range(1, sym.orbit.r + 1):
        s, ks = g.perms[i - 1], g.gauges[i - 1]
        Ti = sym.orbit.lengths[i - 1]
        for p in range(1, sym.weight.lam[i - 1] + 1):
            c = sym.weight.coord(i, p)
            perm[c] = sym.weight.coord(i, s[p - 1])
            delta[c] = (Ti * ks[p - 1]) % sym.T
    return perm, delta


def act_letter(sym: SymData, g: GroupElem, letter):
    perm, delta = _coord_maps(sym, g)
    i, k = letter
    return (perm[i], (k + delta[i]) % sym.T)


def _act_tree(perm, delta, T, tree):
    if isinstance(tree[0], int):
        i, k = tree
        return (perm[i], (k + delta[i]) % T)
    left, right = tree
    return (_act_tree(perm, delta, T, left), _act_tree(perm, delta, T, right))


def act_chain(sym: SymData, g: GroupElem, u: ChainElem) -> ChainElem:
    T = sym.T
    perm, delta = _coord_maps(sym, g)
    out = ChainElem()
    for (wedge, mono), c in u.terms.items():
        wd = [_bar_combo(_act_tree(perm, delta, T, b.tree), T) for b in wedge]
        sd = [_bar_combo(_act_tree(perm, delta, T, b.tree), T)
              for b in mono.slot0]
        slots = tuple(tuple(Commutator("A", _act_tree(perm, delta, T, f.tree), T)
                            for f in word) for word in mono.slots)
        out = out + _chain_from_parts(wd, sd, slots, T, c)
    return out


def act_hyperplane(sym: SymData, g: GroupElem, H: Hyperplane) -> Hyperplane:
    T = sym.T
    perm, delta = _coord_maps(sym, g)
    if H.kind == "point":
        return Hyperplane.point(perm[H.i], H.j, H.k - delta[H.i], T)
    if H.kind == "diag":
        return Hyperplane.diag(perm[H.i], perm[H.j],
                               H.k - delta[H.i] + delta[H.j], T)
    return Hyperplane.zero(perm[H.i])


def act_edge(sym: SymData, g: GroupElem, L):
    if L.is_empty():
        return EMPTY
    T = sym.T
    perm, delta = _coord_maps(sym, g)
    cons = []
    for con in _edge_constraints(L):
        if con[0] == "tt":
            _, c, d, k = con
            cons.append(("tt", perm[c], perm[d], (k + delta[d] - delta[c]) % T))
        elif con[0] == "tz":
            _, c, j, r = con
            cons.append(("tz", perm[c], j, (r + delta[c]) % T))
        else:
            cons.append(("t0", perm[con[1]]))
    return _merge(L.m, T, cons)


def act_flag(sym: SymData, g: GroupElem, F: FlagPath) -> FlagPath:
    return FlagPath(F.m, F.T, tuple(act_edge(sym, g, L) for L in F.steps))


def act_flag_vector(sym: SymData, g: GroupElem, v) -> FlagVector:
    if isinstance(v, FlagPath):
        v = FlagVector.of(v)
    return FlagVector({act_flag(sym, g, F): c for F, c in v.items()})


def act_form(sym: SymData, g: GroupElem, x):
    if isinstance(x, tuple):
        return tuple(act_hyperplane(sym, g, H) for H in x)
    return FormVector({act_form(sym, g, t): c for t, c in x.items()})


def signed_average(sym: SymData, v) -> FlagVector:
    """Image of the projector averaging sign(g) * g over the group."""
    acc = {}
    for g in group_elements(sym):
        acc = lc_add(acc, (Fraction(sign_of(g)), act_flag_vector(sym, g, v)))
    return FlagVector(lc_scale(Fraction(1, group_order(sym)), acc))


def average_chain(sym: SymData, u: ChainElem) -> ChainElem:
    """Image of the plain averaging projector on chains."""
    acc = ChainElem()
    for g in group_elements(sym):
        acc = acc + act_chain(sym, g, u)
    return Fraction(1, group_order(sym)) * acc


# ---------------------------------------------------------------------------
# the block-letter side of the symmetrization

class SigmaChain:
    """Chain element over the block letters: wedge factors are Lyndon words
    in the letters 1..R, the slot-0 word and the evaluation-slot words are
    plain letter words."""

    def __init__(self, terms=None):
        self.terms = dict(terms or {})

    @staticmethod
    def unit(wedge, slot0=(), slots=(), coeff=Fraction(1)):
        wedge = tuple(tuple(w) for w in wedge)
        keyed = sorted(range(len(wedge)), key=lambda i: _word_key("N", wedge[i]))
        sorted_w = tuple(wedge[i] for i in keyed)
        for w1, w2 in zip(sorted_w, sorted_w[1:]):
            if w1 == w2:
                return SigmaChain()
        inv = sum(1 for a in range(len(keyed)) for b in range(a + 1, len(keyed))
                  if keyed[a] > keyed[b])
        c = Fraction(coeff) * (-1) ** inv
        if c == 0:
            return SigmaChain()
        return SigmaChain({(sorted_w, tuple(slot0),
                            tuple(tuple(w) for w in slots)): c})

    def __add__(self, other):
        return SigmaChain(lc_add(self.terms, other.terms))

    def __sub__(self, other):
        return SigmaChain(lc_add(self.terms, (Fraction(-1), other.terms)))

    def __rmul__(self, c):
        return SigmaChain(lc_scale(c, self.terms))

    def __eq__(self, other):
        return self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (w, s0, ss), c in sorted(self.terms.items(), key=repr):
            ws = "^".join("[" + ".".join(f"F{u}" for u in f) + "]" for f in w) or "1"
            body = "".join(f"F{u}" for u in s0) + "v0"
            for j, word in enumerate(ss, start=1):
                body += "|" + "".join(f"F{u}" for u in word) + f"v{j}"
            bits.append(f"({c})*{ws}*({body})")
        return " + ".join(bits)


def _letter_to_block(sym: SymData, letter):
    """(coordinate, phase) -> block letter."""
    c, k = letter
    i, _ = sym.weight.block_of(c)
    return sym.orbit.power(sym.orbit.iota[i - 1], k)


def _block_to_letters(sym: SymData, u):
    """Block letter -> all phased coordinate letters it unfolds into."""
    i, k = sym.orbit.decompose(u)
    Ti = sym.orbit.lengths[i - 1]
    return [(sym.weight.coord(i, n), (k + Ti * l) % sym.T)
            for l in range(sym.T // Ti)
            for n in range(1, sym.weight.lam[i - 1] + 1)]


def _map_tree_to_block(sym, tree):
    if _is_leaf("A", tree):
        return _letter_to_block(sym, tree)
    left, right = tree
    return (_map_tree_to_block(sym, left), _map_tree_to_block(sym, right))


def _expand_block_tree(sym, tree):
    """All phased-coordinate trees a block-letter tree unfolds into."""
    if _is_leaf("N", tree):
        return list(_block_to_letters(sym, tree))
    left, right = tree
    return [(l, r) for l in _expand_block_tree(sym, left)
            for r in _expand_block_tree(sym, right)]


def _block_weight(sym: SymData, letters):
    mu = [0] * sym.orbit.r
    for u in letters:
        i, _ = sym.orbit.decompose(u)
        mu[i - 1] += 1
    return mu


def _check_support(sym: SymData, letters, support):
    mu = _block_weight(sym, letters)
    need = [0] * sym.orbit.r
    for c in support:
        i, _ = sym.weight.block_of(c)
        need[i - 1] += 1
    if mu != need:
        raise WeightMismatch(f"block weight {mu} cannot fill support {tuple(support)}")


@lru_cache(maxsize=None)
def _u_nbar_solver(support, T):
    """Word-level coordinates over sorted products of projected commutators."""
    solver = SpanSolver(lambda w: (len(w), w))
    for mono in u_nbar_basis(support, T):
        poly = {(): Fraction(1)}
        for b in mono:
            poly = _wp_mul(poly, b.orbit_poly())
        ok = solver.add(poly, mono)
        assert ok, f"dependent product basis at {mono}"
    return solver


def _decompose_slot0(word_poly, T):
    """{letter word: coeff} -> {tuple of bars: coeff}, split by support."""
    groups = {}
    for w, c in word_poly.items():
        sup = tuple(sorted(i for i, _ in w))
        groups.setdefault(sup, {})[w] = c
    out = {}
    for sup, sub in groups.items():
        if not sup:
            out = lc_add(out, {(): sub[()]})
            continue
        if len(set(sup)) != len(sup):
            raise WrongWeight(f"repeated coordinate in slot-0 word over {sup}")
        coords = _u_nbar_solver(sup, T).solve(sub)
        if coords is None:
            raise ValueError("slot-0 word polynomial is not an invariant product")
        out = lc_add(out, coords)
    return out


def _as_block_poly(x):
    if isinstance(x, dict) and x and isinstance(next(iter(x)), tuple):
        return dict(x)
    return expand(x)


def sym_s(sym: SymData, x, support=None):
    """Unfold block letters into phased coordinates and keep the part whose
    coordinates are exactly the support, once each.

    Lie input (a block-letter Commutator, LieElem, or word polynomial) comes
    back as a phased Lie element; a SigmaChain comes back as a ChainElem."""
    if isinstance(x, SigmaChain):
        return _sym_s_chain(sym, x, support)
    target = tuple(sorted(support)) if support is not None \
        else tuple(range(1, sym.m + 1))
    poly = _as_block_poly(x)
    out = {}
    for w, c in poly.items():
        _check_support(sym, w, target)
        choices = [_block_to_letters(sym, u) for u in w]
        for combo in itertools.product(*choices):
            coords = tuple(sorted(l[0] for l in combo))
            if coords == target:
                out = lc_add(out, {tuple(combo): c})
    return LieElem("A", lie_coords(out, "A", sym.T), sym.T)


def _bar_factor(sym, tree, support_set):
    """Image of one wedge factor: phase-averaged, over projected commutators."""
    raw = {}
    for t in _expand_block_tree(sym, tree):
        sup = _tree_support(t)
        if len(set(sup)) != len(sup) or not set(sup) <= support_set:
            continue
        b = BarCommutator.make(t, sym.T)
        raw[b] = raw.get(b, Fraction(0)) + Fraction(1, sym.T)
    return _bar_reexpand({b: c for b, c in raw.items() if c})


def _sym_s_chain(sym: SymData, x: SigmaChain, support=None) -> ChainElem:
    # the slot-0 cofactor of a fixed (wedge, slot words) pair is only
    # phase-invariant as a whole, so decompose it after summing every term
    support = tuple(sorted(support)) if support is not None \
        else tuple(range(1, sym.m + 1))
    support_set = set(support)
    T = sym.T
    staged = {}
    for (wedge, slot0, slots), c in x.terms.items():
        letters = [u for w in wedge for u in w] + list(slot0) + \
                  [u for w in slots for u in w]
        _check_support(sym, letters, support)
        factor_dicts = [_bar_factor(sym, gamma_tree("N", w), support_set)
                        for w in wedge]
        slot_choices = []
        for word in slots:
            opts = [[l for l in _block_to_letters(sym, u) if l[0] in support_set]
                    for u in word]
            slot_choices.append([tuple(cmb) for cmb in itertools.product(*opts)])
        s0_opts = [[l for l in _block_to_letters(sym, u) if l[0] in support_set]
                   for u in slot0]
        for bars in itertools.product(*(d.items() for d in factor_dicts)):
            sorted_b, bsign = _perm_sign_sort(tuple(b for b, _ in bars))
            if bsign == 0:
                continue
            wsup = [i for b in sorted_b for i in b.support]
            if len(set(wsup)) != len(wsup):
                continue
            cw = c * bsign
            for _, cb in bars:
                cw *= cb
            for scombo in itertools.product(*slot_choices):
                ssup = [l[0] for word in scombo for l in word]
                taken = wsup + ssup
                if len(set(taken)) != len(taken):
                    continue
                left = support_set - set(taken)
                for w0 in itertools.product(*s0_opts):
                    coords = [l[0] for l in w0]
                    if len(set(coords)) == len(coords) and set(coords) == left:
                        key = (sorted_b, scombo)
                        poly = staged.setdefault(key, {})
                        w = tuple(w0)
                        poly[w] = poly.get(w, Fraction(0)) + cw
    out = ChainElem()
    for (bars, scombo), poly in staged.items():
        poly = {w: c for w, c in poly.items() if c}
        if not poly:
            continue
        slots2 = tuple(tuple(Commutator("A", l, T) for l in word)
                       for word in scombo)
        for pbw, c0 in _decompose_slot0(poly, T).items():
            out = out + ChainElem.unit(bars, ModMonomial(tuple(pbw), slots2), c0)
    return out


def _invariance_generators(sym: SymData):
    ident_perms = tuple(tuple(range(1, l + 1)) for l in sym.weight.lam)
    zero_gauges = tuple((0,) * l for l in sym.weight.lam)
    for i, l in enumerate(sym.weight.lam, start=1):
        for p in range(1, l):
            s = list(range(1, l + 1))
            s[p - 1], s[p] = s[p], s[p - 1]
            perms = list(ident_perms)
            perms[i - 1] = tuple(s)
            yield GroupElem(tuple(perms), zero_gauges)
        if sym.phase_mod(i) > 1 and l >= 1:
            gauges = list(zero_gauges)
            gauges[i - 1] = (1,) + (0,) * (l - 1)
            yield GroupElem(ident_perms, tuple(gauges))


def pi(sym: SymData, u: ChainElem, check=True) -> SigmaChain:
    """Collapse phased coordinates to block letters.  Only chains fixed by
    the whole group collapse faithfully; check verifies that first."""
    if check:
        for g in _invariance_generators(sym):
            if act_chain(sym, g, u) != u:
                raise NotInvariant("chain is not fixed by the wreath product")
    T = sym.T
    out = SigmaChain()
    for (wedge, mono), c in u.terms.items():
        factor_dicts = []
        for b in wedge:
            poly = {}
            for s in range(T):
                t = _map_tree_to_block(sym, _tau_tree(b.tree, s, T))
                poly = lc_add(poly, _expand_tree("N", t))
            factor_dicts.append(lie_coords(poly, "N"))
        s0_poly = {(): Fraction(1)}
        for b in mono.slot0:
            orbit = {}
            for s in range(T):
                t = _map_tree_to_block(sym, _tau_tree(b.tree, s, T))
                orbit = lc_add(orbit, _expand_tree("N", t))
            s0_poly = _wp_mul(s0_poly, orbit)
        slots = tuple(tuple(_letter_to_block(sym, f.tree) for f in word)
                      for word in mono.slots)
        for combo in itertools.product(*(d.items() for d in factor_dicts)):
            cw = c
            for _, cf in combo:
                cw *= cf
            for w0, c0 in s0_poly.items():
                out = out + SigmaChain.unit([w for w, _ in combo], w0, slots,
                                            cw * c0)
    return out


__all__ = [
    "WrongWeight", "RepeatedIndex", "WeightMismatch", "NotInvariant",
    "edge_of_commutator", "psi", "psi_inv",
    "OrbitData", "WeightLambda", "SymData", "GroupElem",
    "identity_elem", "compose", "group_order", "group_elements",
    "sign_of", "character_chi", "jacobian",
    "act_letter", "act_chain", "act_hyperplane", "act_edge", "act_flag",
    "act_flag_vector", "act_form", "signed_average", "average_chain",
    "SigmaChain", "sym_s", "pi",
]
