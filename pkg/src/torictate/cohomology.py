"""Independent Cech local-cohomology oracle, closed-form line-bundle checks,
the fast exterior-resolution cohomology table, 0-regularity, and the
Betti-degree bound verifiers.

The oracle works from localization strands of the presentation; the fast
path works from minimal free resolutions of differential modules; they
share nothing past basic linear algebra, so their agreement is meaningful
evidence of correctness.
"""

from __future__ import annotations

from .bgg import R, betti_table
from .dmres import min_free_resolution
from .errors import PreconditionError, StabilizationError, WindowTooSmall
from .laurent import CechComplex, MonomialStrands
from .smodule import monomial_basis, realize, truncate
from .toric import Window, deg_neg, deg_sub, weights_degI, weights_zgraded

T_START = 2
T_CAP = 64


def _stabilize(compute, t_floor=T_START):
    """Adaptive doubling of the exponent bound until two consecutive values
    of t agree, never accepting below the degree-derived floor (plateaus
    below the reach of a class would otherwise stabilize too early)."""
    prev = None
    t = max(T_START, min(t_floor, T_CAP))
    while t <= T_CAP:
        cur = compute(t)
        if prev is not None and cur == prev:
            return cur
        prev = cur
        t *= 2
    if prev is not None and compute(T_CAP) == prev:
        return prev
    raise StabilizationError("Cech exponent bound did not stabilize up to t = %d" % T_CAP)


def exponent_floor(stack, a):
    """A per-degree lower bound for the truncation exponent: classes in
    degree a are reachable once every inverted exponent may go down by
    (|theta(a)| + theta(w)) / min theta(x_i)."""
    theta = stack.theta
    minw = min(theta(d) for d in stack.var_degrees)
    return (abs(theta(tuple(a))) + theta(stack.total_degree)) // minw + 1


class CechOracle:
    """Cech strands of a realized module over the irrelevant cover (or a
    custom cover, e.g. the variables of a primitive collection). Monomial
    presentations run on the exact per-exponent strand decomposition; the
    dense path handles everything else."""

    def __init__(self, module, cover=None, force_dense=False, floors_fn=None):
        self.module = module
        self.stack = module.stack
        self.field = module.field
        self.cover = [frozenset(c) for c in (cover if cover is not None else self.stack.cover)]
        self._complexes = {}
        self._strands = None
        if floors_fn is None:
            theta = self.stack.theta
            w = theta(self.stack.total_degree)

            def floors_fn(inner, _theta=theta, _w=w):
                reach = abs(_theta(inner)) + _w
                return [reach // _theta(d) + 1 for d in self.stack.var_degrees]

        self.floors_fn = floors_fn
        if module.pres.is_monomial() and not force_dense:
            self._strands = MonomialStrands(self.stack, self.field, module.pres,
                                            self.cover, shift=module.shift)

    def _complex(self, t):
        if t not in self._complexes:
            self._complexes[t] = CechComplex(
                self.stack, self.field, self.module.pres, self.cover, t,
                shift=self.module.shift, module_piece=self.module,
                floors_fn=self.floors_fn)
        return self._complexes[t]

    def _dims(self, a, t, extended):
        if self._strands is not None:
            return self._strands.strand_homology(a, extended, t, keep=self.module.kept)
        return self._complex(t).strand_homology(a, extended=extended)

    def _t_floor(self, a):
        # both paths apply theta-weighted per-variable floors per degree
        return T_START

    def local_dims(self, a, t=None):
        """All H^i_B(M)_a at once (i = 0 .. #cover)."""
        if t is not None:
            return self._dims(a, t, True)
        return _stabilize(lambda tt: self._dims(a, tt, True), t_floor=self._t_floor(a))

    def sheaf_dims(self, a, t=None):
        """All H^i(X, M~(a)) at once (i = 0 .. #cover - 1)."""
        if t is not None:
            return self._dims(a, t, False)
        return _stabilize(lambda tt: self._dims(a, tt, False), t_floor=self._t_floor(a))


def local_cohomology_oracle(module, stack, a, i, t=None):
    """dim H^i_B(M)_a via the extended Cech strand on the generators of B."""
    oracle = CechOracle(module)
    dims = oracle.local_dims(tuple(a), t=t)
    return dims[i] if 0 <= i < len(dims) else 0


def sheaf_cohomology_oracle(module, stack, a, i, t=None):
    """dim H^i(X, M~(a)) via the (non-extended) Cech strand."""
    oracle = CechOracle(module)
    dims = oracle.sheaf_dims(tuple(a), t=t)
    return dims[i] if 0 <= i < len(dims) else 0


def oracle_table(module, stack, degrees, imax=None):
    """The oracle's cohomology table over the given degrees."""
    oracle = CechOracle(module)
    imax = imax if imax is not None else len(oracle.cover) - 1
    table = {}
    for a in degrees:
        dims = oracle.sheaf_dims(tuple(a))
        for i in range(min(imax + 1, len(dims))):
            if dims[i]:
                table[(i, tuple(a))] = dims[i]
    return table


def weighted_closed_forms(stack, a):
    """(h^0, h^n) for O(a) on a weighted projective stack: the monomial
    count at a, and by duality the count at -a - w."""
    if stack.r != 1:
        raise PreconditionError("closed forms require r = 1")
    w = stack.total_degree
    h0 = len(monomial_basis(stack, tuple(a)))
    hn = len(monomial_basis(stack, deg_sub(deg_neg(a), w)))
    return h0, hn


def h0b_vanishes(module, degrees):
    """True when H^0_B(M) vanishes at every listed degree."""
    oracle = CechOracle(module)
    for a in degrees:
        if module.dim(a) == 0:
            continue
        if oracle.local_dims(tuple(a))[0]:
            return False
    return True


def default_truncation(pres, stack):
    """max(0, largest generator/relation theta-degree) - the documented
    heuristic; a bad choice fails loudly through the H^0_B check."""
    theta = stack.theta
    cand = [0]
    cand += [theta(d) for d in pres.gen_degrees]
    cand += [theta(d) for d in pres.rel_degrees]
    return max(cand)


def fast_table_state(pres, stack, window, field, d=None):
    """Algorithm state shared by the fast table and the weighted Tate
    construction: the truncated realized module, its R, and the minimal
    free resolution down to the window floor."""
    if stack.r != 1:
        raise PreconditionError("the exterior fast path requires r = 1 (Cl = Z)")
    w = stack.total_degree[0]
    if d is None:
        d = default_truncation(pres, stack)
    lo, hi = window.lo[0], window.hi[0]
    hi_m = max(hi, w, d + w)
    # the module window must reach below the resolution floor so the scan
    # range is fully inside the certified degree set
    lo_m = min(d, 0, lo)
    module = realize(pres, stack, Window((lo_m,), (hi_m,)), field)
    trunc = truncate(module, d)
    check_degrees = [(x,) for x in range(d, hi_m + 1)]
    if not h0b_vanishes(trunc, check_degrees):
        raise PreconditionError("H^0_B of the truncation at %d does not vanish; raise the truncation" % d)
    dm = R(trunc)
    floor = lo + w
    state = min_free_resolution(dm, floor=floor)
    if state.top_hit:
        raise WindowTooSmall("homology of the truncation reaches the window ceiling; enlarge the window")
    return d, trunc, dm, state


def cohomology_table_fast(pres, stack, window, field, d=None):
    """Sheaf cohomology of M~ over the window: H^0 rows at a >= d read off
    the module, everything else read off the generator twists of the
    minimal free resolution (a generator omega_E(-a; i+1) is one dimension
    of H^i(X, M~(a)))."""
    d, trunc, dm, state = fast_table_state(pres, stack, window, field, d=d)
    lo, hi = window.lo[0], window.hi[0]
    table = {}
    for a in range(d, hi + 1):
        v = trunc.dim((a,))
        if v:
            table[(0, (a,))] = v
    for tw in state.gens:
        a = deg_neg(tw.cl)
        i = tw.aux - 1
        if i < 0:
            raise AssertionError("resolution generator with auxiliary twist 0")
        if lo <= a[0] <= hi and not (i == 0 and a[0] >= d):
            key = (i, a)
            table[key] = table.get(key, 0) + 1
        elif i == 0 and a[0] >= d:
            # internal consistency: the tail never duplicates the module row
            raise AssertionError("section-row generator above the truncation")
    return table


def is_0_regular(module, stack, dmax=None):
    """The local-cohomology vanishing (H^i_B M)_d = 0 for d >= -w^{i-1},
    checked on a finite range topped by dmax plus two stabilization rows."""
    if stack.r != 1:
        raise PreconditionError("0-regularity in this form requires r = 1")
    w, upper, _ = weights_zgraded(stack)
    if dmax is None:
        tops = [stack.theta(a) for a in module.window.points() if module.dim(a)]
        dmax = (max(tops) if tops else 0) + w + 1
    oracle = CechOracle(module)
    n1 = stack.nvars
    for d in range(-upper[n1], dmax + 3):
        dims = oracle.local_dims((d,))
        for i in range(0, n1 + 1):
            if d >= -upper[i - 1] and dims[i]:
                return False
    return True


def is_deg_I_0_regular(module, stack, collection_vars, cl_degrees):
    """deg_I 0-regularity: H^i of the Cech complex on the collection's
    variables must vanish in every Cl-degree a with deg_I(a) >= -w^{i-1}_I,
    checked over the supplied window of Cl-degrees."""
    pc = stack.collection(collection_vars)
    upper = weights_degI(stack, collection_vars)
    cover = [frozenset([i]) for i in sorted(pc.vars)]
    wI = sum(pc.values[i] for i in pc.vars)

    def floors(inner):
        reach = abs(pc.deg(inner)) + wI
        return [reach // pc.values[i] + 1 if i in pc.vars else 1
                for i in range(stack.nvars)]

    oracle = CechOracle(module, cover=cover, floors_fn=floors)
    k = len(cover)
    for a in cl_degrees:
        z = pc.deg(tuple(a))
        thresholds = [(-upper[i - 1]) for i in range(0, k + 1)]
        if all(z < th for th in thresholds):
            continue
        dims = oracle.local_dims(tuple(a))
        for i in range(0, k + 1):
            if z >= -upper[i - 1] and dims[i]:
                return False
    return True


class BoundReport:
    def __init__(self, checked, violations):
        self.checked = checked
        self.violations = violations

    @property
    def ok(self):
        return not self.violations


def check_betti_bounds_weighted(module, stack, degrees=None, require_nonneg_generation=False):
    """Every nonzero beta_{i,a} satisfies a < w^{i+1} (and i <= a when the
    module is generated in degrees >= 0). Requires 0-regularity."""
    if not is_0_regular(module, stack):
        raise PreconditionError("module is not 0-regular")
    w, upper, _ = weights_zgraded(stack)
    bt = betti_table(module, degrees=degrees)
    violations = []
    for (i, a), v in sorted(bt.items()):
        if v <= 0:
            continue
        if a[0] >= upper[i + 1]:
            violations.append(((i, a), "a >= w^%d = %d" % (i + 1, upper[i + 1])))
        if require_nonneg_generation and a[0] < i:
            violations.append(((i, a), "a < i"))
    return BoundReport(sorted(bt.items()), violations)


def check_betti_bounds_multigraded(module, stack, collection_vars, degrees, regularity_degrees=None):
    """Every nonzero beta_{j,a} satisfies deg_I(a) < w^{j+1}_I. The module
    must be deg_I 0-regular (checked on the window)."""
    pc = stack.collection(collection_vars)
    if regularity_degrees is None:
        regularity_degrees = degrees
    if not is_deg_I_0_regular(module, stack, collection_vars, regularity_degrees):
        raise PreconditionError("module is not deg_I 0-regular for %r" % (sorted(pc.vars),))
    upper = weights_degI(stack, collection_vars)
    bt = betti_table(module, degrees=degrees)
    violations = []
    for (j, a), v in sorted(bt.items()):
        if v <= 0:
            continue
        if pc.deg(a) >= upper[j + 1]:
            violations.append(((j, a), "deg_I(a) >= w^%d_I = %d" % (j + 1, upper[j + 1])))
    return BoundReport(sorted(bt.items()), violations)
