import numpy as np
import pytest

from torictate.linalg import (GF, Mat, RowReducer, homology_dim, invert,
                              kernel_basis, rank, rref, solve_in_span)


def test_rank_empty(gf):
    assert rank(Mat.zeros(gf, 0, 0)) == 0


def test_rank_identity(gf):
    assert rank(Mat(gf, np.eye(3, dtype=np.int64))) == 3


def test_rank_dependent_rows(gf):
    # [[1,2],[2,4]]: second row is twice the first
    assert rank(Mat(gf, [[1, 2], [2, 4]])) == 1


def test_kernel_identity(gf):
    k = kernel_basis(Mat(gf, np.eye(4, dtype=np.int64)))
    assert k.cols == 0


def test_kernel_zero_matrix(gf):
    k = kernel_basis(Mat.zeros(gf, 2, 3))
    assert k.cols == 3


def test_kernel_single_row(gf):
    m = Mat(gf, [[1, 1, 0]])
    k = kernel_basis(m)
    assert k.cols == 2
    assert (m @ k).is_zero()
    # (1, -1, 0) lies in the kernel span
    target = gf.array([[1], [-1], [0]])
    assert solve_in_span(gf, k.a, target) is not None


def test_homology_zero_differentials(gf):
    z = Mat.zeros(gf, 3, 0)
    z2 = Mat.zeros(gf, 0, 3)
    assert homology_dim(z, z2) == 3


def test_homology_exact_pair(gf):
    # 0 -> k -> k^2 -> k -> 0 with d_in = (1,0)^t, d_out = (0,1): exact at middle
    d_in = Mat(gf, [[1], [0]])
    d_out = Mat(gf, [[0, 1]])
    assert homology_dim(d_in, d_out) == 0


def test_homology_koszul_one_variable(gf):
    # K(x0) on P^1 in a nonzero degree d = 2: S(-1)_2 -> S_2 is injective,
    # so the kernel-end homology vanishes.
    x0 = Mat(gf, [[1, 0], [0, 1], [0, 0]])  # mult by x0: S_1 -> S_2
    nothing = Mat.zeros(gf, 2, 0)
    assert homology_dim(nothing, x0) == 0


def test_homology_rejects_nonzero_composite(gf):
    d_in = Mat(gf, [[1], [0]])
    d_out = Mat(gf, [[1, 0]])
    with pytest.raises(ValueError):
        homology_dim(d_in, d_out)


def test_homology_rejects_shape_mismatch(gf):
    with pytest.raises(ValueError):
        homology_dim(Mat.zeros(gf, 3, 1), Mat.zeros(gf, 1, 2))


def test_rank_plus_nullity(gf, rng):
    for _ in range(25):
        r = rng.randrange(0, 6)
        c = rng.randrange(0, 6)
        a = gf.zeros(r, c)
        for i in range(r):
            for j in range(c):
                a[i, j] = rng.randrange(-10, 11) % gf.p
        m = Mat(gf, a)
        assert rank(m) + kernel_basis(m).cols == c


def test_homology_invariant_under_basis_change(gf, rng):
    # d_out d_in = 0 built from a random middle splitting; conjugating the
    # middle by an invertible matrix preserves the homology dimension.
    for _ in range(10):
        n = rng.randrange(2, 6)
        rk_in = rng.randrange(0, n)
        d_in = gf.zeros(n, rk_in)
        for i in range(rk_in):
            d_in[i, i] = 1
        rk_out = rng.randrange(0, n - rk_in + 1)
        d_out = gf.zeros(rk_out, n)
        for i in range(rk_out):
            d_out[i, n - 1 - i] = 1
        h0 = homology_dim(Mat(gf, d_in), Mat(gf, d_out))
        g = None
        while g is None:
            cand = gf.array([[rng.randrange(0, gf.p) for _ in range(n)] for _ in range(n)])
            try:
                invert(gf, cand)
                g = cand
            except ValueError:
                pass
        gi = invert(gf, g)
        h1 = homology_dim(Mat(gf, gf.reduce(gi @ d_in)), Mat(gf, gf.reduce(d_out @ g)))
        assert h0 == h1


def test_gf_and_qq_agree(rng, gf, qq):
    for trial in range(15):
        hi = 30 if trial < 2 else 8
        r = rng.randrange(1, hi)
        c = rng.randrange(1, hi)
        rows = [[rng.randrange(-10, 11) for _ in range(c)] for _ in range(r)]
        assert rank(Mat(gf, rows)) == rank(Mat(qq, rows))
        assert kernel_basis(Mat(gf, rows)).cols == kernel_basis(Mat(qq, rows)).cols


def test_gf_rejects_non_prime():
    with pytest.raises(ValueError):
        GF(32004)
    with pytest.raises(ValueError):
        GF(2)


def test_row_reducer_quotient(gf):
    # k^3 modulo the span of (1, 1, 0): quotient has dimension 2
    red = RowReducer(gf, gf.array([[1, 1, 0]]))
    assert red.corank == 2
    v = gf.array([[0, 1, 0]])
    coords = red.reduce_rows(v)
    assert coords.shape == (1, 2)
    # e1 itself is a quotient basis vector (the pivot label is e0)
    assert list(coords[0]) == [1, 0]
    # e0 reduces to -e1 in the quotient
    w = gf.array([[1, 0, 0]])
    assert list(red.reduce_rows(w)[0]) == [gf.p - 1, 0]


def test_rref_pivots(qq):
    r, piv = rref(qq, qq.array([[2, 4], [1, 2]]))
    assert piv == [0]
    assert r.shape[0] == 1
