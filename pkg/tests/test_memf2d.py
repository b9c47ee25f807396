import math
import random
from collections import Counter

import numpy as np
import pytest

from memf import families, kernels, memf1d, memf2d, oracle
from memf.memf2d import CutParams2D, GridRegion
from memf.partition import within_bound

G1 = families.gaussian_2d(1.0)
G4 = families.Product2D(families.Gaussian(0.25), families.Gaussian(0.25))
ONE = families.constant_2d(1.0)
L_SHAPE6 = [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 1)]


def random_polyomino(rng, max_size=20):
    size = rng.randint(1, max_size)
    cells = {(0, 0)}
    while len(cells) < size:
        i, j = rng.choice(sorted(cells))
        di, dj = rng.choice([(1, 0), (0, 1), (-1, 0), (0, -1)])
        cells.add((i + di, j + dj))
    return cells


def brute(f, P):
    return oracle.direct_sum_2d(lambda i, j: float(f.value(i, j)), sorted(P))


def corner_dict(path):
    c = Counter()
    for i, j, s in path.corners:
        c[(i, j)] += s
    return {k: v for k, v in c.items() if v}


def test_single_square_corners():
    path = memf2d.trace_boundary(GridRegion([(0, 0)]))
    assert sorted(path.corners) == [(0, 0, 1), (0, 1, -1), (1, 0, -1), (1, 1, 1)]


def test_rectangle_corners():
    path = memf2d.trace_boundary(GridRegion.rectangle(2, 4, -1, 2))
    assert sorted(path.corners) == [(2, -1, 1), (2, 2, -1), (4, -1, -1), (4, 2, 1)]
    assert len(path.edges) == 2 * (2 + 3)


def test_L_shape_alternates():
    path = memf2d.trace_boundary(GridRegion([(0, 0), (1, 0), (0, 1)]))
    assert len(path.corners) == 6
    signs = [s for _, _, s in path.loop_corners(0)]
    assert all(a == -b for a, b in zip(signs, signs[1:] + signs[:1]))


def test_hole_is_clockwise():
    ring = [(i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)]
    path = memf2d.trace_boundary(GridRegion(ring))
    assert sorted(path.orientation) == [-1, 1]
    assert memf2d.memf_sum_region(ONE, ring, CutParams2D(2, 0)).total == pytest.approx(8, abs=1e-12)


def test_pinch_vertex():
    path = memf2d.trace_boundary(GridRegion([(0, 0), (1, 1)]))
    assert len(path.loops) == 2
    assert corner_dict(path) == GridRegion([(0, 0), (1, 1)]).vertex_signs()


def test_empty_region_rejected():
    with pytest.raises(ValueError):
        memf2d.trace_boundary(GridRegion([]))


def test_operator_B_constant():
    for d in ("x", "y"):
        assert memf2d.operator_B_apply(ONE, d, 5, 2, 0.3, 0.8) == pytest.approx(-0.5)


def test_operator_B_gaussian():
    x, y = 0.6, -0.2
    got = memf2d.operator_B_apply(G1, "x", 3, 0, x, y)
    f = math.exp(-x * x - y * y)
    # -f/2 + T_{2,0} f_x with T_{2,0} = 1/12, the Bernoulli B_2/2! coefficient
    assert got == pytest.approx(-f / 2 + (1 / 12) * (-2 * x * f), rel=1e-14)


def test_operator_b_is_derivative_of_B():
    h = 1e-5
    for d, dx, dy in (("x", h, 0), ("y", 0, h)):
        num = (memf2d.operator_B_apply(G4, d, 6, 1, 0.4 + dx, 0.9 + dy) - memf2d.operator_B_apply(G4, d, 6, 1, 0.4 - dx, 0.9 - dy)) / (2 * h)
        assert memf2d.operator_b_apply(G4, d, 6, 1, 0.4, 0.9) == pytest.approx(num, rel=1e-7)


def test_c_envelope_vanishes_on_low_degree():
    f = families.Product2D(families.Polynomial([1, 2, 3]), families.Gaussian(1.0))
    assert memf2d.operator_c_envelope(f, "x", 3, 0, 0.5, 0.5) == 0.0
    assert memf2d.operator_c_envelope(G1, "x", 3, 0, 0.5, 0.5) == pytest.approx(
        kernels.tail(3, 0) * abs(G1.partial(3, 0, 0.5, 0.5))
    )


def test_constant_rectangle():
    assert memf2d.memf_sum_rectangle(ONE, 0, 2, 0, 3, CutParams2D(2, 0)).total == pytest.approx(6, abs=1e-12)


def test_gaussian_rectangle_within_symmetric_bound():
    est = memf2d.memf_sum_rectangle(G1, 1, 6, 1, 6, CutParams2D(3, 1))
    bd = memf2d.remainder_bound_2d_symmetric(G1, GridRegion.rectangle(1, 6, 1, 6), 3, 1)
    ref = brute(G1, GridRegion.rectangle(1, 6, 1, 6).squares)
    assert abs(est.total - ref) <= bd.value


def test_single_square_estimate():
    est = memf2d.memf_sum_rectangle(G4, 2, 3, -1, 0, CutParams2D(4, 2))
    assert abs(est.total - G4.value(2, -1)) <= est.best_bound().value


def test_explicit_set_only():
    est = memf2d.memf_sum_region(G1, {(3, 5)}, CutParams2D(2, 0, explicit_set={(3, 5)}))
    assert (est.area, est.line, est.vertex) == (0.0, 0.0, 0.0)
    assert est.total == G1.value(3, 5)


def test_explicit_set_must_be_subset():
    with pytest.raises(ValueError):
        memf2d.memf_sum_region(G1, {(0, 0)}, CutParams2D(2, 0, explicit_set={(1, 1)}))


def test_block_and_L_shape_within_bound():
    block = GridRegion.rectangle(0, 3, 0, 3).squares
    est = memf2d.memf_sum_region(G1, block, CutParams2D(3, 1))
    assert abs(est.total - brute(G1, block)) <= est.bounds[0].value
    est = memf2d.memf_sum_region(G4, L_SHAPE6, CutParams2D(4, 1))
    assert abs(est.total - brute(G4, L_SHAPE6)) <= est.bounds[0].value


def test_non_separable_within_bound():
    f = families.Ridge2D(families.Gaussian(0.25), 1.0, 0.5)
    est = memf2d.memf_sum_region(f, L_SHAPE6, CutParams2D(4, 1))
    assert abs(est.total - brute(f, L_SHAPE6)) <= est.bounds[0].value


def test_bound_zero_for_low_degree():
    f = families.Product2D(families.Polynomial([1, 1]), families.Polynomial([2, -1]))
    assert memf2d.remainder_bound_2d(f, GridRegion.rectangle(0, 3, 0, 2), 2, 0, 2, 0).value == 0.0


def test_symmetric_matches_general():
    for region in (GridRegion.rectangle(1, 6, 1, 6), GridRegion(L_SHAPE6)):
        for n, p in ((3, 1), (4, 0), (6, 2)):
            a = memf2d.remainder_bound_2d(G4, region, n, p, n, p).value
            b = memf2d.remainder_bound_2d_symmetric(G4, region, n, p).value
            assert a == pytest.approx(b, rel=1e-13)


def test_symmetric_bound_decreases_in_p():
    region = GridRegion.rectangle(0, 4, 0, 4)
    for n in (3, 5):
        assert memf2d.remainder_bound_2d_symmetric(G1, region, n, 2).value < memf2d.remainder_bound_2d_symmetric(G1, region, n, 1).value


def test_area_terms_subadditive():
    left, right = GridRegion.rectangle(0, 2, 0, 3), GridRegion.rectangle(2, 5, 0, 3)
    whole = GridRegion.rectangle(0, 5, 0, 3)
    b = memf2d.remainder_bound_2d_symmetric
    assert b(G1, whole, 4, 1).value <= b(G1, left, 4, 1).value + b(G1, right, 4, 1).value


def test_rectangle_additivity():
    cut = CutParams2D(4, 1, 3, 2)
    for f in (G4, families.Ridge2D(families.Gaussian(0.25), 1.0, 0.5)):
        left = memf2d.memf_sum_rectangle(f, 0, 2, 0, 3, cut, with_bounds=False).total
        right = memf2d.memf_sum_rectangle(f, 2, 5, 0, 3, cut, with_bounds=False).total
        whole = memf2d.memf_sum_rectangle(f, 0, 5, 0, 3, cut, with_bounds=False).total
        assert abs(whole - left - right) <= 1e-10


def test_tensor_consistency():
    g, h = families.Gaussian(0.3), families.ExpCos(0.2, 1.5)
    f = families.Product2D(g, h)
    for n, p, n2, p2 in ((3, 0, 3, 0), (4, 2, 6, 1)):
        est = memf2d.memf_sum_rectangle(f, -1, 3, 0, 4, CutParams2D(n, p, n2, p2), with_bounds=False)
        gx = memf1d.memf_sum_halfopen(g, -1, 3, memf1d.CutParams(0, n, p)).total
        hy = memf1d.memf_sum_halfopen(h, 0, 4, memf1d.CutParams(0, n2, p2)).total
        assert est.total == pytest.approx(gx * hy, abs=1e-13)


def test_random_polyominoes():
    rng = random.Random(20240611)
    for _ in range(100):
        cells = random_polyomino(rng)
        region = GridRegion(cells)
        path = memf2d.trace_boundary(region)
        for k in range(len(path.loops)):
            signs = [s for _, _, s in path.loop_corners(k)]
            assert len(signs) % 2 == 0
            assert all(a == -b for a, b in zip(signs, signs[1:] + signs[:1]))
        assert corner_dict(path) == region.vertex_signs()
        est = memf2d.memf_sum_region(ONE, cells, CutParams2D(2, 0), with_bounds=False)
        assert abs(est.total - len(cells)) <= 1e-10


def test_random_polyomino_bounds():
    rng = random.Random(99)
    for _ in range(50):
        cells = random_polyomino(rng)
        shift = (rng.randint(-3, 3), rng.randint(-3, 3))
        cells = {(i + shift[0], j + shift[1]) for i, j in cells}
        est = memf2d.memf_sum_region(G4, cells, CutParams2D(3, 1))
        ref = brute(G4, cells)
        assert within_bound(est.total - ref, est.bounds[0].value, est.total, ref)
