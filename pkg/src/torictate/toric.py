"""Degrees, positive gradings, effective cones, and toric stack data.

A stack is described combinatorially: variable degrees in Cl = Z^r, the
supports of the monomial generators of the irrelevant ideal, a Cech cover
(defaults to those supports), a positive grading functional, effective-cone
generators, and optional primitive collections with their deg_I vectors.
Fans are never computed; the user supplies this data directly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def deg_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def deg_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def deg_neg(a):
    return tuple(-x for x in a)


def deg_zero(r):
    return (0,) * r


class Window:
    """A finite coordinate box of degrees in Z^r."""

    def __init__(self, lo, hi):
        self.lo = tuple(lo)
        self.hi = tuple(hi)
        if len(self.lo) != len(self.hi):
            raise ValueError("window bounds have mismatched ranks")
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise ValueError("window lower bound exceeds upper bound")

    @property
    def r(self):
        return len(self.lo)

    def __contains__(self, d):
        return all(l <= x <= h for l, x, h in zip(self.lo, d, self.hi))

    def __eq__(self, other):
        return isinstance(other, Window) and (self.lo, self.hi) == (other.lo, other.hi)

    def __repr__(self):
        return "Window(%r, %r)" % (self.lo, self.hi)

    def points(self):
        return [tuple(p) for p in itertools.product(*[range(l, h + 1) for l, h in zip(self.lo, self.hi)])]

    def expand(self, lo_margin, hi_margin):
        return Window(
            tuple(l + m for l, m in zip(self.lo, lo_margin)),
            tuple(h + m for h, m in zip(self.hi, hi_margin)),
        )


class PositiveGrading:
    """A linear functional theta on Cl with theta(deg x_i) > 0 for all i."""

    def __init__(self, coeffs):
        self.coeffs = tuple(int(c) for c in coeffs)

    def __call__(self, d):
        return sum(c * x for c, x in zip(self.coeffs, d))

    def __repr__(self):
        return "PositiveGrading(%r)" % (self.coeffs,)


class EffCone:
    def __init__(self, generators):
        self.generators = [tuple(g) for g in generators]


class PrimitiveCollection:
    """A primitive collection I with its deg_I values on the variables.

    deg_I(x_l) > 0 for l in I and <= 0 otherwise; the values must come from
    a single linear functional on Cl, which is solved for and stored."""

    def __init__(self, vars_, values, var_degrees, r):
        self.vars = frozenset(vars_)
        self.values = tuple(int(v) for v in values)
        if len(self.values) != len(var_degrees):
            raise ValueError("deg_I vector must have one value per variable")
        for l, v in enumerate(self.values):
            if l in self.vars and v <= 0:
                raise ValueError("deg_I(x_%d) must be > 0 for %d in the collection" % (l, l))
            if l not in self.vars and v > 0:
                raise ValueError("deg_I(x_%d) must be <= 0 for %d outside the collection" % (l, l))
        self.functional = _solve_functional(var_degrees, self.values, r)

    def deg(self, d):
        v = sum(c * x for c, x in zip(self.functional, d))
        if v.denominator != 1:
            raise ValueError("deg_I is not integral on degree %r" % (d,))
        return int(v)


def _solve_functional(var_degrees, values, r):
    """Solve lam . deg(x_i) = values[i] for lam in Q^r by exact elimination."""
    rows = [[Fraction(x) for x in d] + [Fraction(v)] for d, v in zip(var_degrees, values)]
    n = len(rows)
    pivots = []
    ri = 0
    for c in range(r):
        piv = next((i for i in range(ri, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[ri], rows[piv] = rows[piv], rows[ri]
        inv = 1 / rows[ri][c]
        rows[ri] = [x * inv for x in rows[ri]]
        for i in range(n):
            if i != ri and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[ri])]
        pivots.append(c)
        ri += 1
    for i in range(ri, n):
        if rows[i][r] != 0:
            raise ValueError("deg_I values are not induced by a linear functional on Cl")
    lam = [Fraction(0)] * r
    for i, c in enumerate(pivots):
        lam[c] = rows[i][r]
    return tuple(lam)


class ToricStack:
    """Combinatorial data of a projective toric stack."""

    def __init__(self, r, var_degrees, irrelevant_supports, theta, cover=None,
                 eff_generators=None, primitive_collections=None):
        self.r = int(r)
        self.var_degrees = [tuple(d) for d in var_degrees]
        if any(len(d) != self.r for d in self.var_degrees):
            raise ValueError("variable degree of wrong rank")
        self.nvars = len(self.var_degrees)
        self.irrelevant_supports = [frozenset(s) for s in irrelevant_supports]
        if any(not s for s in self.irrelevant_supports):
            raise ValueError("irrelevant ideal generator with empty support")
        for s in self.irrelevant_supports:
            if any(i < 0 or i >= self.nvars for i in s):
                raise ValueError("irrelevant support has out-of-range variable index")
        self.theta = theta if isinstance(theta, PositiveGrading) else PositiveGrading(theta)
        for d in self.var_degrees:
            if self.theta(d) <= 0:
                raise ValueError("grading functional is not positive on variable degree %r" % (d,))
        self.cover = [frozenset(s) for s in (cover if cover is not None else self.irrelevant_supports)]
        gens = eff_generators if eff_generators is not None else self.var_degrees
        self.eff = EffCone(gens)
        for g in self.eff.generators:
            if self.theta(g) <= 0:
                raise ValueError("effective-cone generator %r with nonpositive theta" % (g,))
        self.primitive_collections = []
        for pc in (primitive_collections or []):
            if isinstance(pc, PrimitiveCollection):
                self.primitive_collections.append(pc)
            else:
                vars_, values = pc
                self.primitive_collections.append(
                    PrimitiveCollection(vars_, values, self.var_degrees, self.r))
        self.total_degree = deg_zero(self.r)
        for d in self.var_degrees:
            self.total_degree = deg_add(self.total_degree, d)
        self._subset_sums = None
        self._subsets_by_sum = None

    # -- degree bookkeeping -------------------------------------------------

    def subset_sums(self):
        """Degree sums over all subsets of the variables (2^(n+1) values)."""
        if self._subset_sums is None:
            self._ensure_subsets()
        return self._subset_sums

    def subsets_by_sum(self):
        """Map degree -> sorted list of variable-subset bitmasks with that sum."""
        if self._subsets_by_sum is None:
            self._ensure_subsets()
        return self._subsets_by_sum

    def _ensure_subsets(self):
        if self.nvars > 62:
            raise ValueError("at most 62 variables are supported")
        table = {}
        sums = []
        for mask in range(1 << self.nvars):
            s = deg_zero(self.r)
            m = mask
            i = 0
            while m:
                if m & 1:
                    s = deg_add(s, self.var_degrees[i])
                m >>= 1
                i += 1
            table.setdefault(s, []).append(mask)
            sums.append(s)
        self._subsets_by_sum = table
        self._subset_sums = sums

    def mask_degree(self, mask):
        s = deg_zero(self.r)
        i = 0
        while mask:
            if mask & 1:
                s = deg_add(s, self.var_degrees[i])
            mask >>= 1
            i += 1
        return s

    def collection(self, vars_):
        key = frozenset(vars_)
        for pc in self.primitive_collections:
            if pc.vars == key:
                return pc
        raise KeyError("no registered primitive collection %r" % (sorted(key),))


def is_irrelevant_subset(stack, subset):
    """True iff P_I contains the irrelevant ideal, i.e. every monomial
    generator support of B meets I."""
    subset = set(subset)
    for i in subset:
        if i < 0 or i >= stack.nvars:
            raise IndexError("variable index %d out of range" % i)
    return all(s & subset for s in stack.irrelevant_supports)


def cone_contains(cone, theta, d):
    """Membership of d in the semigroup generated by the cone generators,
    decided by bounded enumeration (coefficients capped via theta)."""
    gens = cone.generators
    tv = theta(d)
    if tv < 0:
        return False
    if all(x == 0 for x in d):
        return True

    def search(idx, rest, rest_theta):
        if all(x == 0 for x in rest):
            return True
        if idx == len(gens) or rest_theta < 0:
            return False
        g = gens[idx]
        gt = theta(g)
        cmax = rest_theta // gt
        for c in range(cmax + 1):
            if search(idx + 1, deg_sub(rest, tuple(c * x for x in g)), rest_theta - c * gt):
                return True
        return False

    return search(0, tuple(d), tv)


def weights_zgraded(stack):
    """For Cl = Z: the total weight w and the sequences w^i (sum of the i
    largest weights) and w_i (sum of the i smallest), as dicts indexed from
    -1 through n+2 including the boundary conventions."""
    if stack.r != 1:
        raise ValueError("w-sequences require a Z-graded (r = 1) stack")
    weights = sorted(d[0] for d in stack.var_degrees)
    if any(w <= 0 for w in weights):
        raise ValueError("all variable degrees must be positive")
    n1 = len(weights)
    w = sum(weights)
    upper = {-1: -1, 0: 0}
    lower = {-1: -1, 0: 0}
    for i in range(1, n1 + 1):
        upper[i] = sum(weights[n1 - i:])
        lower[i] = sum(weights[:i])
    upper[n1 + 1] = upper[n1] + 1
    lower[n1 + 1] = lower[n1] + 1
    return w, upper, lower


def weights_degI(stack, vars_):
    """The thresholds w^j_I of a registered primitive collection: max deg_I
    sum over j-subsets of I for j < #I, the full sum for j >= #I.
    Returned as a dict for j in -1 .. n+2."""
    pc = stack.collection(vars_)
    vals = sorted((pc.values[i] for i in pc.vars), reverse=True)
    k = len(vals)
    total = sum(vals)
    out = {-1: -1, 0: 0}
    nmax = stack.nvars + 1
    for j in range(1, nmax + 1):
        out[j] = sum(vals[:j]) if j < k else total
    return out


def safe_region(stack, window):
    """Degrees a in the window with a + s in the window for every variable
    subset-sum s. Homology and resolution answers are asserted only here."""
    sums = set(stack.subset_sums())
    out = []
    for a in window.points():
        if all(deg_add(a, s) in window for s in sums):
            out.append(a)
    return set(out)


# -- stock examples used across the test-suite and docs ----------------------

def weighted_projective(*weights):
    """P(d_0, ..., d_n): Cl = Z, B = <x_0, ..., x_n>."""
    n1 = len(weights)
    return ToricStack(
        r=1,
        var_degrees=[(w,) for w in weights],
        irrelevant_supports=[{i} for i in range(n1)],
        theta=(1,),
    )


def projective_space(n):
    return weighted_projective(*([1] * (n + 1)))


def hirzebruch(t):
    """The Hirzebruch surface of type t: degrees (1,0), (-t,1), (1,0), (0,1),
    B = (x0,x2) cap (x1,x3)."""
    return ToricStack(
        r=2,
        var_degrees=[(1, 0), (-t, 1), (1, 0), (0, 1)],
        irrelevant_supports=[{0, 1}, {0, 3}, {1, 2}, {2, 3}],
        theta=(1, t + 1),
        primitive_collections=[({0, 2}, (1, -t, 1, 0)), ({1, 3}, (0, 1, 0, 1))],
    )


def p1xp1():
    """P^1 x P^1: degrees (1,0), (0,1), (1,0), (0,1)."""
    return ToricStack(
        r=2,
        var_degrees=[(1, 0), (0, 1), (1, 0), (0, 1)],
        irrelevant_supports=[{0, 1}, {0, 3}, {1, 2}, {2, 3}],
        theta=(1, 1),
        primitive_collections=[({0, 2}, (1, 0, 1, 0)), ({1, 3}, (0, 1, 0, 1))],
    )
