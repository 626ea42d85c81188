"""Multigraded polynomial-ring side: monomials, presentations, and the
degreewise realization (per-degree bases plus multiplication matrices) that
all downstream functors consume.

There is deliberately no Groebner machinery anywhere: a module is only ever
seen through its graded pieces and the multiplication maps between them,
each obtained by exact linear algebra on a finite degree window.
"""

from __future__ import annotations

import numpy as np

from .linalg import Mat, RowReducer
from .toric import Window, deg_add, deg_sub, deg_zero


def monomial_basis(stack, d):
    """All exponent vectors e with sum e_i deg(x_i) = d, in lexicographic
    order (cached on the stack; treat the result as immutable). Finiteness
    comes from positivity of the grading."""
    cache = getattr(stack, "_monomial_cache", None)
    if cache is None:
        cache = stack._monomial_cache = {}
    key = tuple(d)
    hit = cache.get(key)
    if hit is not None:
        return hit
    d = key
    theta = stack.theta
    budget = theta(d)
    if budget < 0:
        return []
    degs = stack.var_degrees
    thetas = [theta(x) for x in degs]
    n1 = stack.nvars
    out = []

    def rec(i, rest, rest_theta, prefix):
        if i == n1:
            if rest_theta == 0 and all(x == 0 for x in rest):
                out.append(tuple(prefix))
            return
        cmax = rest_theta // thetas[i]
        for c in range(cmax + 1):
            rec(i + 1, deg_sub(rest, tuple(c * x for x in degs[i])),
                rest_theta - c * thetas[i], prefix + [c])

    rec(0, tuple(d), budget, [])
    out.sort()
    cache[key] = out
    return out


class Poly:
    """A homogeneous polynomial: list of (coefficient, exponent vector)."""

    def __init__(self, terms):
        self.terms = [(c, tuple(e)) for c, e in terms]
        seen = set()
        for _, e in self.terms:
            if e in seen:
                raise ValueError("duplicate exponent vector %r" % (e,))
            seen.add(e)

    @classmethod
    def monomial(cls, exponents, coeff=1):
        return cls([(coeff, exponents)])

    def degree(self, stack):
        """The common Cl-degree of the terms (None for the zero polynomial)."""
        d = None
        for _, e in self.terms:
            de = deg_zero(stack.r)
            for i, ei in enumerate(e):
                if ei:
                    de = deg_add(de, tuple(ei * x for x in stack.var_degrees[i]))
            if d is None:
                d = de
            elif d != de:
                raise ValueError("inhomogeneous polynomial entry")
        return d

    def is_zero(self):
        return not self.terms


class Presentation:
    """A graded free presentation coker(F1 -> F0): generator degrees,
    relation degrees, and a matrix of homogeneous entries (entry (i, j) of
    degree rel[j] - gen[i])."""

    def __init__(self, gen_degrees, rel_degrees=(), entries=None):
        self.gen_degrees = [tuple(d) for d in gen_degrees]
        self.rel_degrees = [tuple(d) for d in rel_degrees]
        self.entries = {}
        if entries:
            for (i, j), poly in entries.items():
                if not isinstance(poly, Poly):
                    poly = Poly(poly)
                if not poly.is_zero():
                    self.entries[(i, j)] = poly

    def validate(self, stack):
        for (i, j), poly in self.entries.items():
            d = poly.degree(stack)
            if d is not None and d != deg_sub(self.rel_degrees[j], self.gen_degrees[i]):
                raise ValueError("entry (%d, %d) is not homogeneous of degree rel - gen" % (i, j))

    @classmethod
    def free(cls, degrees=((),)):
        degrees = [tuple(d) for d in degrees]
        return cls(degrees or [()])

    @classmethod
    def quotient(cls, stack, polys):
        """S modulo the given homogeneous elements (one generator in degree 0)."""
        polys = [p if isinstance(p, Poly) else Poly.monomial(p) for p in polys]
        rel_degrees = [p.degree(stack) for p in polys]
        entries = {(0, j): p for j, p in enumerate(polys)}
        return cls([deg_zero(stack.r)], rel_degrees, entries)

    def is_monomial(self):
        """True when every relation is a single monomial on a single generator
        and there is one generator (monomial-quotient fast paths apply)."""
        if len(self.gen_degrees) != 1:
            return False
        for j in range(len(self.rel_degrees)):
            col = [(i, p) for (i, jj), p in self.entries.items() if jj == j]
            if len(col) != 1 or len(col[0][1].terms) != 1:
                return False
        return True

    def monomial_exponents(self):
        return [p.terms[0][1] for (_, _), p in sorted(self.entries.items())]


class DegreewiseModule:
    """A graded module realized on a window: an ordered basis per degree and
    multiplication matrices between adjacent pieces.

    Pieces at theta-degrees below `floor_theta` are known to vanish even
    outside the window (the module is generated in degrees above it)."""

    def __init__(self, stack, field, pres, window, shift=None, keep=None):
        self.stack = stack
        self.field = field
        self.pres = pres
        self.window = window
        self.shift = tuple(shift) if shift is not None else deg_zero(stack.r)
        self.keep = keep
        pres.validate(stack)
        gen_thetas = [stack.theta(deg_sub(d, self.shift)) for d in pres.gen_degrees]
        self.floor_theta = min(gen_thetas) if gen_thetas else 0
        self._pieces = {}
        self._mult = {}

    # M(shift)_a = M_(a + shift); truncation drops pieces where keep is False.

    def _kept(self, a):
        return self.keep is None or self.keep(a)

    def kept(self, a):
        """Whether the truncation retains the piece at a."""
        return self._kept(tuple(a))

    def piece(self, a):
        """(labels, reducer) at degree a; labels are (gen, exponent) pairs."""
        a = tuple(a)
        if a in self._pieces:
            return self._pieces[a]
        if not self._kept(a):
            val = ([], None)
        else:
            inner = deg_add(a, self.shift)
            labels = []
            for g, gd in enumerate(self.pres.gen_degrees):
                for e in monomial_basis(self.stack, deg_sub(inner, gd)):
                    labels.append((g, e))
            if not labels:
                val = ([], None)
            else:
                index = {lab: k for k, lab in enumerate(labels)}
                rows = []
                for j, rd in enumerate(self.pres.rel_degrees):
                    for m in monomial_basis(self.stack, deg_sub(inner, rd)):
                        row = [self.field.zero] * len(labels)
                        nonzero = False
                        for i in range(len(self.pres.gen_degrees)):
                            poly = self.pres.entries.get((i, j))
                            if poly is None:
                                continue
                            for c, e in poly.terms:
                                lab = (i, tuple(x + y for x, y in zip(e, m)))
                                row[index[lab]] = self.field.add(row[index[lab]], self.field.of(c))
                                nonzero = True
                        if nonzero:
                            rows.append(row)
                if rows:
                    red = RowReducer(self.field, self.field.array(rows))
                else:
                    red = None
                val = (labels, red)
        self._pieces[a] = val
        return val

    def dim(self, a):
        labels, red = self.piece(a)
        if red is None:
            return len(labels)
        return red.corank

    def basis_labels(self, a):
        labels, red = self.piece(a)
        if red is None:
            return list(labels)
        return [labels[j] for j in red.free]

    def in_window(self, a):
        return tuple(a) in self.window

    def piece_known(self, a):
        """True when the piece at a is determined (inside the window, or
        below the generator floor where it must vanish, or truncated away)."""
        return self.in_window(a) or self.stack.theta(a) < self.floor_theta or not self._kept(a)

    def mult_matrix(self, i, a):
        """Multiplication by x_i from piece(a) to piece(a + deg x_i)."""
        a = tuple(a)
        key = (i, a)
        if key in self._mult:
            return self._mult[key]
        b = deg_add(a, self.stack.var_degrees[i])
        src_labels, src_red = self.piece(a)
        tgt_labels, tgt_red = self.piece(b)
        src_basis = self.basis_labels(a)
        nt = self.dim(b)
        m = self.field.zeros(nt, len(src_basis))
        if nt and src_basis:
            tgt_index = {lab: k for k, lab in enumerate(tgt_labels)}
            amb = self.field.zeros(len(src_basis), len(tgt_labels))
            for col, (g, e) in enumerate(src_basis):
                lab = (g, tuple(x + (1 if k == i else 0) for k, x in enumerate(e)))
                if lab in tgt_index:
                    amb[col, tgt_index[lab]] = self.field.one
            if tgt_red is None:
                m = amb.T.copy()
            else:
                m = tgt_red.reduce_rows(amb).T.copy()
        out = Mat(self.field, m)
        self._mult[key] = out
        return out


def realize(pres, stack, window, field):
    """Realize a presentation as a DegreewiseModule on the window."""
    return DegreewiseModule(stack, field, pres, window)


def truncate(module, threshold):
    """M_{>= d}: keep piece(a) iff a - d lies in the effective cone
    (multigraded), or theta(a) >= d when an integer threshold is given."""
    from .toric import cone_contains

    stack = module.stack
    if isinstance(threshold, int):
        old = module.keep
        keep = lambda a, t=threshold: (old is None or old(a)) and stack.theta(a) >= t
    else:
        d = tuple(threshold)
        old = module.keep
        keep = lambda a: (old is None or old(a)) and cone_contains(stack.eff, stack.theta, deg_sub(a, d))
    return DegreewiseModule(stack, module.field, module.pres, module.window,
                            shift=module.shift, keep=keep)


def twist(module, a):
    """M(a): relabeled pieces, M(a)_b = M_{a+b}."""
    a = tuple(a)
    old = module.keep
    keep = None if old is None else (lambda b: old(deg_add(b, a)))
    return DegreewiseModule(
        module.stack, module.field, module.pres,
        Window(deg_sub(module.window.lo, a), deg_sub(module.window.hi, a)),
        shift=deg_add(module.shift, a), keep=keep)


class SpanSubmodule:
    """The submodule of a realized module generated by its pieces at the
    given degrees, presented degreewise: the piece at b is the span of all
    monomial multiples of the generating pieces landing there.

    Exposes the DegreewiseModule surface the BGG functors consume."""

    def __init__(self, module, gen_degrees, window):
        self.stack = module.stack
        self.field = module.field
        self.inner = module
        self.gen_degrees = [tuple(d) for d in gen_degrees]
        self.window = window
        self.floor_theta = min(self.stack.theta(d) for d in self.gen_degrees)
        self._basis = {}

    def _span(self, b):
        b = tuple(b)
        if b in self._basis:
            return self._basis[b]
        field = self.field
        cols = []
        dimt = self.inner.dim(b)
        for d in self.gen_degrees:
            shift = deg_sub(b, d)
            if self.stack.theta(shift) < 0 or self.inner.dim(d) == 0:
                continue
            for mono in monomial_basis(self.stack, shift):
                m = field.zeros(self.inner.dim(d), self.inner.dim(d))
                for k in range(self.inner.dim(d)):
                    m[k, k] = field.one
                pos = d
                for i, e in enumerate(mono):
                    for _ in range(e):
                        m = field.reduce(self.inner.mult_matrix(i, pos).a @ m)
                        pos = deg_add(pos, self.stack.var_degrees[i])
                cols.append(m)
        if not cols:
            val = field.zeros(dimt, 0)
        else:
            val = np.concatenate(cols, axis=1)
        from .linalg import rref

        r, _ = rref(field, val.T)
        self._basis[b] = r.T
        return self._basis[b]

    def dim(self, a):
        return self._span(a).shape[1]

    def piece_known(self, a):
        return tuple(a) in self.window or self.stack.theta(a) < self.floor_theta

    def in_window(self, a):
        return tuple(a) in self.window

    def mult_matrix(self, i, a):
        from .linalg import solve_in_span

        a = tuple(a)
        src = self._span(a)
        tgt = self._span(deg_add(a, self.stack.var_degrees[i]))
        inner_m = self.inner.mult_matrix(i, a).a
        x = solve_in_span(self.field, tgt, self.field.reduce(inner_m @ src))
        if x is None:
            raise ValueError("span is not multiplication-closed at %r" % (a,))
        return Mat(self.field, x)


def generated_truncation(module, d, window):
    """The submodule generated by the piece in degree d, with pieces
    relabeled so the generators sit in degree 0 (the module M_{>= d}(d)
    when a single truncation degree pins the generators)."""
    d = tuple(d)
    shifted = twist(module, d)
    return SpanSubmodule(shifted, [deg_zero(module.stack.r)], window)


def presentation_from_span(span, rel_degrees):
    """A minimal finite presentation of a span submodule generated in degree
    zero: at each relation degree (in increasing grading order) the kernel
    of the evaluation map is reduced modulo multiples of the relations
    already chosen, and only genuinely new syzygies are kept. The degrees
    must include every minimal first-syzygy degree."""
    from .dmres import _IncrementalRank
    from .linalg import _kernel_arr, solve_in_span

    stack = span.stack
    field = span.field
    zero = deg_zero(stack.r)
    ngens = span.dim(zero)
    gen_degrees = [zero] * ngens
    rel_degs = []
    chosen = []  # (degree, dict (gen, exponent) -> coeff)
    entries = {}

    def evaluation(b):
        """Columns (per (gen, monomial) pair) of the evaluation into the
        span basis at degree b, plus the labels."""
        monos = monomial_basis(stack, b)
        tgt = span._span(b)
        cols = []
        labels = []
        for mu in monos:
            mat = field.zeros(ngens, ngens)
            for k in range(ngens):
                mat[k, k] = field.one
            pos = zero
            for i, e in enumerate(mu):
                for _ in range(e):
                    mat = field.reduce(span.inner.mult_matrix(i, pos).a @ mat)
                    pos = deg_add(pos, stack.var_degrees[i])
            coords = solve_in_span(field, tgt, mat)
            for k in range(ngens):
                cols.append(coords[:, k])
                labels.append((k, mu))
        return cols, labels

    for b in sorted((tuple(x) for x in rel_degrees), key=lambda d: (stack.theta(d), d)):
        cols, labels = evaluation(b)
        if not cols:
            continue
        index = {lab: k for k, lab in enumerate(labels)}
        stacked = field.zeros(cols[0].shape[0], len(cols))
        for c, v in enumerate(cols):
            stacked[:, c] = v
        ker = _kernel_arr(field, stacked)
        if ker.shape[1] == 0:
            continue
        acc = _IncrementalRank(field, len(labels))
        for cdeg, vec in chosen:
            shift = deg_sub(b, cdeg)
            if stack.theta(shift) < 0:
                continue
            for m in monomial_basis(stack, shift):
                mult = field.zeros(len(labels), 1)[:, 0]
                ok = True
                for (k, mu), coeff in vec.items():
                    lab = (k, tuple(x + y for x, y in zip(mu, m)))
                    j = index.get(lab)
                    if j is None:
                        ok = False
                        break
                    mult[j] = field.add(mult[j], coeff)
                if ok:
                    acc.add(mult)
        for c in range(ker.shape[1]):
            if not acc.add(ker[:, c]):
                continue
            vec = {}
            relj = len(rel_degs)
            rel_degs.append(b)
            for pos_idx, lab in enumerate(labels):
                v = ker[pos_idx, c]
                if v != field.zero:
                    coeff = v.item() if hasattr(v, "item") else v
                    vec[lab] = coeff
                    k, mu = lab
                    poly = entries.get((k, relj))
                    terms = poly.terms if poly else []
                    entries[(k, relj)] = Poly(terms + [(coeff, mu)])
            chosen.append((b, vec))
    return Presentation(gen_degrees, rel_degs, entries)


def verify_multiplication_commutes(module, degrees=None):
    """Check mult(j, a + deg x_i) mult(i, a) = mult(i, a + deg x_j) mult(j, a)
    wherever all pieces lie in the window."""
    stack = module.stack
    degrees = degrees if degrees is not None else module.window.points()
    for a in degrees:
        for i in range(stack.nvars):
            for j in range(i + 1, stack.nvars):
                ai = deg_add(a, stack.var_degrees[i])
                aj = deg_add(a, stack.var_degrees[j])
                ab = deg_add(ai, stack.var_degrees[j])
                if not all(module.in_window(x) for x in (a, ai, aj, ab)):
                    continue
                lhs = module.mult_matrix(j, ai) @ module.mult_matrix(i, a)
                rhs = module.mult_matrix(i, aj) @ module.mult_matrix(j, a)
                if lhs != rhs:
                    return False
    return True


class GradedComplex:
    """A windowed complex of graded vector spaces: for each homological index
    j and each degree a, a basis-size and a matrix term_j(a) -> term_{j-1}(a).
    The differential preserves the degree a."""

    def __init__(self, field):
        self.field = field
        self.dims = {}
        self.maps = {}

    def set_dim(self, j, a, n):
        self.dims[(j, tuple(a))] = n

    def dim(self, j, a):
        return self.dims.get((j, tuple(a)), 0)

    def set_map(self, j, a, mat):
        self.maps[(j, tuple(a))] = mat

    def map(self, j, a):
        """The matrix term_j(a) -> term_{j-1}(a)."""
        a = tuple(a)
        m = self.maps.get((j, a))
        if m is None:
            return Mat.zeros(self.field, self.dim(j - 1, a), self.dim(j, a))
        return m

    def js(self):
        return sorted({j for j, _ in self.dims})

    def homology(self, j, a):
        from .linalg import homology_dim

        return homology_dim(self.map(j + 1, a), self.map(j, a))

    def check_complex(self, a):
        for j in self.js():
            m1 = self.map(j + 1, a)
            m0 = self.map(j, a)
            if m1.cols and m0.rows and not (m0 @ m1).is_zero():
                return False
        return True


def koszul_complex(stack, window, field):
    """The Koszul complex on the variables, realized degreewise: term j has
    one summand S(-d) for each j-subset of variables with degree sum d, and
    the differential is contraction against sum x_i e_i."""
    cx = GradedComplex(field)
    n1 = stack.nvars
    degs = stack.var_degrees
    masks_by_size = {}
    for mask in range(1 << n1):
        masks_by_size.setdefault(bin(mask).count("1"), []).append(mask)
    for a in window.points():
        bases = {}
        for j in range(n1 + 2):
            basis = []
            for mask in masks_by_size.get(j, []):
                d = stack.mask_degree(mask)
                for e in monomial_basis(stack, deg_sub(a, d)):
                    basis.append((mask, e))
            bases[j] = basis
            cx.set_dim(j, a, len(basis))
        for j in range(1, n1 + 1):
            src = bases[j]
            tgt = bases.get(j - 1, [])
            if not src or not tgt:
                continue
            index = {lab: k for k, lab in enumerate(tgt)}
            m = field.zeros(len(tgt), len(src))
            for col, (mask, e) in enumerate(src):
                sign = 1
                for i in range(n1):
                    if mask & (1 << i):
                        newe = tuple(x + (1 if k == i else 0) for k, x in enumerate(e))
                        lab = (mask & ~(1 << i), newe)
                        if lab in index:
                            c = field.of(sign)
                            m[index[lab], col] = field.add(m[index[lab], col], c)
                        sign = -sign
            cx.set_map(j, a, Mat(field, m))
    return cx
