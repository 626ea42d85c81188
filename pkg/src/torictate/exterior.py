"""The Koszul-dual exterior algebra E with its Cl + Z grading.

Monomials are variable subsets stored as bitmasks; elements are sparse
coefficient dicts. Free modules are sums of twists omega_E(c; u) of the
dual module omega_E = Hom_k(E, k) ~ E(-w; -n-1), where w is the sum of the
variable degrees. All degree bookkeeping goes through these twist labels:
the summand omega_E(c; u) has its socle in degree (-c; -u) and its module
generator in degree (w - c; n + 1 - u).

Internally a twist omega_E(c; u) is the free module E(c - w; u - n - 1)
with monomial basis {e_T}; the basis vector e_T of a summand sits in degree
(w - c - deg(e_T's variables); n + 1 - u - |T|). Maps between free modules
act by left multiplication by elements of E.
"""

from __future__ import annotations

from typing import NamedTuple

from .toric import deg_neg, deg_sub


def popcount(mask):
    return bin(mask).count("1")


def mul_sign(u, t):
    """Sign of e_U * e_T for disjoint bitmasks: (-1)^(number of pairs
    i in U, j in T with i > j)."""
    sign = 1
    m = u
    while m:
        i = (m & -m).bit_length() - 1
        lower = t & ((1 << i) - 1)
        if popcount(lower) & 1:
            sign = -sign
        m &= m - 1
    return sign


def ext_mul(m1, m2):
    """Product of exterior monomials: None if they share a variable, else
    (sign, union)."""
    if m1 & m2:
        return None
    return mul_sign(m1, m2), m1 | m2


def elem_scale(x, c, field):
    if c == field.zero:
        return {}
    return {m: field.mul(v, c) for m, v in x.items()}


def elem_add(x, y, field):
    out = dict(x)
    for m, v in y.items():
        s = field.add(out.get(m, field.zero), v)
        if s == field.zero:
            out.pop(m, None)
        else:
            out[m] = s
    return out


def elem_mul(x, y, field):
    """Product in E of sparse elements."""
    out = {}
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            r = ext_mul(m1, m2)
            if r is None:
                continue
            sign, m = r
            c = field.mul(c1, c2)
            if sign < 0:
                c = field.neg(c)
            s = field.add(out.get(m, field.zero), c)
            if s == field.zero:
                out.pop(m, None)
            else:
                out[m] = s
    return out


def elem_mask_filter(x, varmask):
    """Delete monomials using variables outside varmask (the E_I quotient)."""
    return {m: c for m, c in x.items() if not (m & ~varmask)}


class OmegaTwist(NamedTuple):
    """Label for the free summand omega_E(cl; aux)."""

    cl: tuple
    aux: int


def twist_shift(tw, cl=None, aux=0):
    return OmegaTwist(tw.cl if cl is None else tuple(x + y for x, y in zip(tw.cl, cl)), tw.aux + aux)


def generator_degree(stack, tw):
    """Degree of the module generator of omega_E(cl; aux)."""
    return deg_sub(stack.total_degree, tw.cl), stack.nvars - tw.aux


def socle_degree(tw):
    return deg_neg(tw.cl), -tw.aux


def basis_degree(stack, tw, mask):
    """(Cl-degree, aux degree) of the basis vector e_mask of the summand."""
    cl = deg_sub(deg_sub(stack.total_degree, tw.cl), stack.mask_degree(mask))
    aux = stack.nvars - tw.aux - popcount(mask)
    return cl, aux


def entry_degree(stack, source_tw, target_tw, shift_aux=-1):
    """Required (Cl, aux) degree in E of a matrix entry source -> target for
    a map of total degree (0; shift_aux); the Cl part equals the degree sum
    of each monomial's variables negated."""
    cl = deg_sub(target_tw.cl, source_tw.cl)
    aux = target_tw.aux - source_tw.aux + shift_aux
    return cl, aux


class FreeEModule:
    """A free E-module given by a list of omega_E twists."""

    def __init__(self, stack, generators):
        self.stack = stack
        self.gens = list(generators)

    def column_basis(self, a, varmask=None):
        """The finite k-basis of the Cl-degree-a slice, as (generator index,
        monomial bitmask) pairs in deterministic order."""
        a = tuple(a)
        mask_all = (1 << self.stack.nvars) - 1 if varmask is None else varmask
        table = self.stack.subsets_by_sum()
        out = []
        for t, tw in enumerate(self.gens):
            need = deg_sub(deg_sub(self.stack.total_degree, tw.cl), a)
            for m in table.get(need, []):
                if m & ~mask_all:
                    continue
                out.append((t, m))
        return out


def socle_readoff(stack, generators):
    """Cohomology-table readout of a minimal module's generators: each
    omega_E(-a; i) increments entry (i, a)."""
    table = {}
    for tw in generators:
        key = (tw.aux, deg_neg(tw.cl))
        table[key] = table.get(key, 0) + 1
    return table
