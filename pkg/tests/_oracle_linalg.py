"""Independent oracle for edge combinatorics: exact affine linear algebra
over Q(w) with concrete z values.

Deliberately shares no logic with cycarr.arrangement: subspaces are systems of
affine equations with cyclotomic coefficients, and intersection, dimension,
and containment are decided by Gaussian elimination over the field Q(w).
Used to cross-check the union-find island engine on small arrangements.

z_j is instantiated as the rational number j + 1; the w-orbits of distinct
z_j then have distinct absolute values, hence are disjoint, for any T.
"""

from fractions import Fraction

from cycarr.scalars import Cyc


def z_value(T, j):
    return Cyc.from_rat(T, Fraction(j + 1))


class AffineSystem:
    """Rows (c_1, ..., c_m | d) meaning sum c_i t_i = d, over Q(w)."""

    def __init__(self, m, T, rows=()):
        self.m = m
        self.T = T
        self.rows = [([Cyc._coerce(Cyc.zero(T), x) for x in r[0]], Cyc._coerce(Cyc.zero(T), r[1]))
                     for r in rows]

    @classmethod
    def from_hyperplane(cls, H, m, T):
        zero = Cyc.zero(T)
        one = Cyc.one(T)
        c = [zero] * m
        if H.kind == "diag":
            c[H.i - 1] = one
            c[H.j - 1] = -Cyc.root(T, H.k)
            d = zero
        elif H.kind == "point":
            c[H.i - 1] = one
            d = Cyc.root(T, H.k) * z_value(T, H.j)
        else:
            c[H.i - 1] = one
            d = zero
        return cls(m, T, [(c, d)])

    def combined(self, other):
        out = AffineSystem(self.m, self.T)
        out.rows = [r for r in self.rows] + [r for r in other.rows]
        return out

    def _echelon(self):
        rows = [([x for x in c], d) for c, d in self.rows]
        pivots = []
        r = 0
        for col in range(self.m):
            pr = None
            for i in range(r, len(rows)):
                if not rows[i][0][col].is_zero():
                    pr = i
                    break
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            c, d = rows[r]
            inv = c[col].inv()
            rows[r] = ([x * inv for x in c], d * inv)
            for i in range(len(rows)):
                if i != r and not rows[i][0][col].is_zero():
                    f = rows[i][0][col]
                    rows[i] = ([a - f * b for a, b in zip(rows[i][0], rows[r][0])],
                               rows[i][1] - f * rows[r][1])
            pivots.append(col)
            r += 1
        inconsistent = any(all(x.is_zero() for x in c) and not d.is_zero()
                           for c, d in rows)
        return rows[:r], pivots, inconsistent

    def is_consistent(self):
        return not self._echelon()[2]

    def rank(self):
        rows, pivots, bad = self._echelon()
        if bad:
            raise ValueError("inconsistent system has no solution set")
        return len(pivots)

    def codim(self):
        return self.rank()

    def implies(self, other):
        """Sol(self) subseteq Sol(other)?  Both assumed consistent."""
        comb = self.combined(other)
        if not comb.is_consistent():
            return False
        return comb.rank() == self.rank()

    def same_solution_set(self, other):
        return self.implies(other) and other.implies(self)


def system_of_edge(edge, spec):
    """Build the oracle system from the combinatorial edge encoding."""
    T, m = spec.T, spec.m
    zero, one = Cyc.zero(T), Cyc.one(T)
    rows = []
    for isl in edge.swim:
        (c0, p0) = isl[0]
        for c, p in isl[1:]:
            # w^p t_c = w^{p0} t_{c0}
            row = [zero] * m
            row[c - 1] = Cyc.root(T, p)
            row[c0 - 1] = -Cyc.root(T, p0)
            rows.append((row, zero))
    for j, pairs in edge.fixed:
        for c, r in pairs:
            row = [zero] * m
            row[c - 1] = Cyc.root(T, r)
            rows.append((row, z_value(T, j)))
    for c in edge.zero:
        row = [zero] * m
        row[c - 1] = one
        rows.append((row, zero))
    return AffineSystem(m, T, rows)
