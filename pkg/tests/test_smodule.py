import pytest

from torictate.smodule import (DegreewiseModule, Poly, Presentation,
                               koszul_complex, monomial_basis, realize,
                               truncate, twist, verify_multiplication_commutes)
from torictate.toric import Window


def test_monomial_basis_p112(p112):
    basis = monomial_basis(p112, (2,))
    assert basis == [(0, 0, 1), (0, 2, 0), (1, 1, 0), (2, 0, 0)]
    assert len(basis) == 4


def test_monomial_basis_degree_zero(p112, hirz3):
    assert monomial_basis(p112, (0,)) == [(0, 0, 0)]
    assert monomial_basis(hirz3, (0, 0)) == [(0, 0, 0, 0)]


def test_monomial_basis_negative(p112):
    assert monomial_basis(p112, (-1,)) == []


def test_monomial_counts_p112(p112):
    # frozen counts for P(1,1,2): dim S_a for a = 0..8
    want = [1, 2, 4, 6, 9, 12, 16, 20, 25]
    got = [len(monomial_basis(p112, (a,))) for a in range(9)]
    assert got == want


def test_realize_free_module(p112, gf, rng):
    m = realize(Presentation.free([(0,)]), p112, Window((0,), (8,)), gf)
    for _ in range(6):
        a = (rng.randrange(0, 9),)
        assert m.dim(a) == len(monomial_basis(p112, a))


def test_realize_stacky_point(p112, gf):
    pres = Presentation.quotient(p112, [(1, 0, 0), (0, 1, 0)])
    m = realize(pres, p112, Window((0,), (8,)), gf)
    for a in range(9):
        assert m.dim((a,)) == (1 if a % 2 == 0 else 0)


def test_realize_hirzebruch_hypersurface(hirz3, gf):
    # M = S/(x0 x1): dim M_(1,1) = dim S_(1,1) - dim S_(3,0) = 7 - 4 = 3
    pres = Presentation.quotient(hirz3, [(1, 1, 0, 0)])
    m = realize(pres, hirz3, Window((-4, -1), (4, 2)), gf)
    assert m.dim((1, 1)) == 3
    assert m.dim((1, 0)) == 2


def test_hypersurface_piece_dims(p112, gf):
    # S/(f) with deg f = 4: dim(M_a) = dim S_a - dim S_{a-4}
    f = Poly([(1, (4, 0, 0)), (1, (0, 4, 0)), (1, (0, 0, 2))])
    pres = Presentation.quotient(p112, [f])
    m = realize(pres, p112, Window((0,), (8,)), gf)
    for a in range(9):
        want = len(monomial_basis(p112, (a,))) - len(monomial_basis(p112, (a - 4,)))
        assert m.dim((a,)) == want


def test_multiplication_commutes(p112, hirz3, gf):
    f = Poly([(1, (4, 0, 0)), (1, (0, 4, 0)), (1, (0, 0, 2))])
    m = realize(Presentation.quotient(p112, [f]), p112, Window((0,), (6,)), gf)
    assert verify_multiplication_commutes(m)
    m2 = realize(Presentation.quotient(hirz3, [(1, 1, 0, 0)]), hirz3,
                 Window((-3, 0), (3, 2)), gf)
    assert verify_multiplication_commutes(m2)


def test_truncate_s_at_zero(p112, gf):
    m = realize(Presentation.free([(0,)]), p112, Window((-4,), (4,)), gf)
    t = truncate(m, 0)
    for a in range(-4, 5):
        want = m.dim((a,)) if a >= 0 else 0
        assert t.dim((a,)) == want


def test_truncate_below_support_is_identity(p112, gf):
    m = realize(Presentation.free([(2,)]), p112, Window((0,), (6,)), gf)
    t = truncate(m, 1)
    for a in range(0, 7):
        assert t.dim((a,)) == m.dim((a,))


def test_truncate_twist_p156_example(p156, gf):
    # N = S/(x0, x1) on P(1,5,6): N_{>=4}(4) has pieces k in degrees 2, 8, 14
    pres = Presentation.quotient(p156, [(1, 0, 0), (0, 1, 0)])
    n = realize(pres, p156, Window((0,), (20,)), gf)
    m = twist(truncate(n, 4), (4,))
    dims = {a: m.dim((a,)) for a in range(-2, 16)}
    assert dims[2] == 1 and dims[8] == 1 and dims[14] == 1
    assert all(v == 0 for a, v in dims.items() if a not in (2, 8, 14))


def test_truncate_realize_commute(p112, gf):
    pres = Presentation.quotient(p112, [(1, 2, 0)])
    w = Window((0,), (6,))
    m1 = truncate(realize(pres, p112, w, gf), 3)
    m2 = truncate(DegreewiseModule(p112, gf, pres, w), 3)
    for a in range(0, 7):
        assert m1.dim((a,)) == m2.dim((a,))


def test_twist_identities(p112, gf):
    m = realize(Presentation.free([(0,)]), p112, Window((0,), (6,)), gf)
    t0 = twist(m, (0,))
    for a in range(0, 7):
        assert t0.dim((a,)) == m.dim((a,))
    t = twist(twist(m, (2,)), (-2,))
    for a in range(0, 7):
        assert t.dim((a,)) == m.dim((a,))


def test_twist_on_p1(p1, gf):
    m = realize(Presentation.free([(0,)]), p1, Window((-3,), (3,)), gf)
    t = twist(m, (-1,))
    assert t.dim((1,)) == m.dim((0,)) == 1


def test_inhomogeneous_entry_rejected(p112, gf):
    bad = Poly([(1, (1, 0, 0)), (1, (0, 0, 1))])
    with pytest.raises(ValueError):
        pres = Presentation.quotient(p112, [bad])
        realize(pres, p112, Window((0,), (3,)), gf)


def test_koszul_complex_p1(p1, gf):
    w = Window((0,), (5,))
    kx = koszul_complex(p1, w, gf)
    for a in w.points():
        assert kx.check_complex(a)
        # H_0 = k in degree 0 only; higher homology vanishes everywhere
        assert kx.homology(0, a) == (1 if a == (0,) else 0)
        for j in (1, 2):
            assert kx.homology(j, a) == 0


def test_koszul_term_twists_p12(p12, gf):
    # K_1 = S(-1) + S(-2): at degree a the piece is S_{a-1} + S_{a-2}
    kx = koszul_complex(p12, Window((0,), (6,)), gf)
    for a in range(0, 7):
        want = len(monomial_basis(p12, (a - 1,))) + len(monomial_basis(p12, (a - 2,)))
        assert kx.dim(1, (a,)) == want


def test_koszul_exactness_p112(p112, gf):
    kx = koszul_complex(p112, Window((0,), (7,)), gf)
    for a in range(0, 8):
        for j in (1, 2, 3):
            assert kx.homology(j, (a,)) == 0
        assert kx.homology(0, (a,)) == (1 if a == 0 else 0)
