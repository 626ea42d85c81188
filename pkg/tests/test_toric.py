import pytest

from torictate.toric import (ToricStack, Window, cone_contains, deg_add,
                             hirzebruch, is_irrelevant_subset, safe_region,
                             weights_degI, weights_zgraded)


def test_irrelevant_single_product_generator():
    # with one generator of full support (B principal, a "cox pair" input),
    # any single variable hits it
    x = ToricStack(r=1, var_degrees=[(1,), (1,), (2,)],
                   irrelevant_supports=[{0, 1, 2}], theta=(1,))
    assert is_irrelevant_subset(x, {0})


def test_irrelevant_weighted_needs_all_vars(p112):
    # B is the maximal ideal: its generator x_1 has support disjoint from {0}
    assert not is_irrelevant_subset(p112, {0})
    assert is_irrelevant_subset(p112, {0, 1, 2})


def test_irrelevant_hirzebruch(hirz3):
    assert is_irrelevant_subset(hirz3, {0, 2})
    assert is_irrelevant_subset(hirz3, {1, 3})
    # generator x2 x3 has support {2, 3}, disjoint from {0, 1}
    assert not is_irrelevant_subset(hirz3, {0, 1})


def test_irrelevant_full_and_empty(p112, hirz3):
    for x in (p112, hirz3):
        assert is_irrelevant_subset(x, set(range(x.nvars)))
        assert not is_irrelevant_subset(x, set())


def test_irrelevant_rejects_bad_index(p112):
    with pytest.raises(IndexError):
        is_irrelevant_subset(p112, {7})


def test_cone_contains_zero(p12):
    assert cone_contains(p12.eff, p12.theta, (0,))


def test_cone_contains_z_graded(p12):
    assert cone_contains(p12.eff, p12.theta, (5,))
    assert not cone_contains(p12.eff, p12.theta, (-1,))


def test_cone_contains_hirzebruch():
    hz = hirzebruch(3)
    from torictate.toric import EffCone

    cone = EffCone([(1, 0), (-3, 1), (0, 1)])
    assert cone_contains(cone, hz.theta, (-3, 1))
    assert not cone_contains(cone, hz.theta, (-4, 1))


def test_cone_closed_under_generators(hirz3, rng):
    pts = [(rng.randrange(-3, 4), rng.randrange(0, 3)) for _ in range(10)]
    for d in pts:
        if cone_contains(hirz3.eff, hirz3.theta, d):
            for g in hirz3.eff.generators:
                assert cone_contains(hirz3.eff, hirz3.theta, deg_add(d, g))


def test_cone_negative_theta(p112, rng):
    for _ in range(10):
        d = (rng.randrange(-8, 0),)
        if p112.theta(d) < 0:
            assert not cone_contains(p112.eff, p112.theta, d)


def test_weights_p156(p156):
    w, up, lo = weights_zgraded(p156)
    assert w == 12
    assert up[1] == 6 and up[2] == 11 and up[3] == 12 and up[4] == 13
    assert up[-1] == -1 and up[0] == 0
    assert lo[-1] == -1 and lo[0] == 0 and lo[1] == 1


def test_weights_p2(p2):
    w, up, lo = weights_zgraded(p2)
    assert w == 3
    for i in range(1, 4):
        assert up[i] == i


def test_weights_p112(p112):
    w, up, _ = weights_zgraded(p112)
    assert w == 4
    assert up[1] == 2 and up[2] == 3 and up[3] == 4


def test_weights_reject_multigraded(hirz3):
    with pytest.raises(ValueError):
        weights_zgraded(hirz3)


def test_weights_degI_hirzebruch(hirz3):
    up = weights_degI(hirz3, {0, 2})
    assert up[1] == 1 and up[2] == 2
    # both collections have the same maximum 2
    up2 = weights_degI(hirz3, {1, 3})
    assert up2[2] == 2
    assert max(up.values()) == 2 and max(up2.values()) == 2


def test_weights_degI_singleton():
    # P(1,1,3)-style model: B = (x1) cap (x0,x2,x3), collection {1} with
    # deg_I from the functional (-1, 0)
    x = ToricStack(
        r=2,
        var_degrees=[(1, 0), (-1, 1), (1, 0), (0, 1)],
        irrelevant_supports=[{1}, {0, 2, 3}],
        theta=(1, 2),
        primitive_collections=[({1}, (-1, 1, -1, 0))],
    )
    up = weights_degI(x, {1})
    assert up[1] == 1


def test_weights_degI_unknown(hirz3):
    with pytest.raises(KeyError):
        weights_degI(hirz3, {0, 1})


def test_deg_I_sign_validation():
    with pytest.raises(ValueError):
        hirzebruch_bad = ToricStack(
            r=2,
            var_degrees=[(1, 0), (-3, 1), (1, 0), (0, 1)],
            irrelevant_supports=[{0, 1}, {0, 3}, {1, 2}, {2, 3}],
            theta=(1, 4),
            primitive_collections=[({0, 2}, (1, 1, 1, 0))],
        )


def test_deg_I_functional_validation():
    # x0 and x2 have equal degrees, so deg_I must agree on them
    with pytest.raises(ValueError):
        ToricStack(
            r=2,
            var_degrees=[(1, 0), (-3, 1), (1, 0), (0, 1)],
            irrelevant_supports=[{0, 1}, {0, 3}, {1, 2}, {2, 3}],
            theta=(1, 4),
            primitive_collections=[({0, 2}, (1, -3, 2, 0))],
        )


def test_deg_I_evaluates_on_degrees(hirz3):
    pc = hirz3.collection({0, 2})
    assert pc.deg((1, 0)) == 1
    assert pc.deg((-3, 1)) == -3
    assert pc.deg((5, 2)) == 5
    pc2 = hirz3.collection({1, 3})
    assert pc2.deg((5, 2)) == 2


def test_safe_region_p1(p1):
    w = Window((0,), (10,))
    assert safe_region(p1, w) == {(a,) for a in range(0, 9)}


def test_safe_region_p112(p112):
    w = Window((-8,), (8,))
    assert safe_region(p112, w) == {(a,) for a in range(-8, 5)}


def test_safe_region_empty(p112):
    w = Window((0,), (3,))
    assert safe_region(p112, w) == set()


def test_theta_positivity_enforced():
    with pytest.raises(ValueError):
        ToricStack(r=1, var_degrees=[(1,), (0,)], irrelevant_supports=[{0}, {1}], theta=(1,))


def test_window_validation():
    with pytest.raises(ValueError):
        Window((0, 0), (1,))
    with pytest.raises(ValueError):
        Window((2,), (1,))
