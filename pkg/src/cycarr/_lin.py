"""Tiny helpers for formal linear combinations as {key: Fraction} dicts."""

from fractions import Fraction


def lc_add(*terms):
    """Sum of (coeff, dict) pairs or bare dicts; drops zeros."""
    out = {}
    for t in terms:
        if isinstance(t, tuple):
            c, d = t
        else:
            c, d = Fraction(1), t
        if c == 0:
            continue
        for k, v in d.items():
            out[k] = out.get(k, Fraction(0)) + c * v
    return {k: v for k, v in out.items() if v != 0}


def lc_scale(c, d):
    c = Fraction(c)
    if c == 0:
        return {}
    return {k: c * v for k, v in d.items()}


def lc_single(key, c=Fraction(1)):
    c = Fraction(c)
    return {key: c} if c != 0 else {}


def lc_eq(a, b):
    return lc_add(a, (Fraction(-1), b)) == {}


class SpanSolver:
    """Incremental exact row reduction of {key: Fraction} vectors.

    add() returns True when the vector enlarges the span; solve() writes a
    vector as a combination of the added labels, or returns None.
    """

    def __init__(self, keyfn):
        self.keyfn = keyfn
        self.rows = []  # (pivot, vec, combo {label: coeff})

    def _reduce(self, vec, combo):
        for piv, rvec, rcombo in self.rows:
            c = vec.get(piv)
            if c:
                vec = lc_add(vec, (-c, rvec))
                combo = lc_add(combo, (-c, rcombo))
        return vec, combo

    def add(self, vec, label):
        vec, combo = self._reduce(dict(vec), {label: Fraction(1)})
        if not vec:
            return False
        piv = min(vec, key=self.keyfn)
        inv = 1 / vec[piv]
        self.rows.append((piv, lc_scale(inv, vec), lc_scale(inv, combo)))
        return True

    def solve(self, vec):
        out = {}
        vec = dict(vec)
        while vec:
            hit = next(((p, rv, rc) for p, rv, rc in self.rows if p in vec), None)
            if hit is None:
                return None
            piv, rvec, rcombo = hit
            c = vec[piv]
            vec = lc_add(vec, (-c, rvec))
            out = lc_add(out, (c, rcombo))
        return out
