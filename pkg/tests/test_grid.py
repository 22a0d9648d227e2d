import math

import numpy as np
import pytest

from woodtex import hashing
from woodtex.grid import (CartesianGridSpec, CylindricalGridSpec, Impulse,
                          impulses_cartesian, impulses_cartesian_reference,
                          impulses_cylindrical, cylindrical_neighborhood)
from woodtex.params import ParameterError

TWO_PI = 2.0 * math.pi


def test_same_cell_queries_identical():
    grid = CartesianGridSpec((1.0, 1.0, 1.0), 2.0)
    a = impulses_cartesian(grid, 5, (0.2, 0.3, 0.4))
    b = impulses_cartesian(grid, 5, (0.9, 0.01, 0.75))
    assert a == b


def test_jitted_enumeration_matches_reference():
    grid = CartesianGridSpec((0.7, 1.3, 2.0), 1.5)
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = rng.uniform(-10, 10, 3)
        fast = impulses_cartesian(grid, 17, p)
        ref = impulses_cartesian_reference(grid, 17, p)
        assert len(fast) == len(ref)
        for a, b in zip(fast, ref):
            assert a.stream == b.stream
            assert a.center == pytest.approx(b.center, abs=0.0)


def test_union_over_lattice_equals_brute_force():
    # oracle: enumerate every cell of the covered region directly
    grid = CartesianGridSpec((1.0, 1.0, 1.0), 2.0)
    seed = 31
    lattice = [(x + 0.5, y + 0.5, z + 0.5)
               for x in range(10) for y in range(10) for z in range(10)]
    union = set()
    for p in lattice:
        for imp in impulses_cartesian(grid, seed, p):
            union.add(imp.stream)
    brute = set()
    for cx in range(-1, 11):
        for cy in range(-1, 11):
            for cz in range(-1, 11):
                key = hashing.hash_u64(seed, [cx, cy, cz])
                n = hashing.poisson_count(hashing.u01(key), grid.density)
                for j in range(n):
                    brute.add(hashing.hash_u64(seed, [cx, cy, cz, j]))
    assert union == brute


def test_mean_list_length_27_lambda():
    grid = CartesianGridSpec((1.0, 1.0, 1.0), 2.0)
    rng = np.random.default_rng(11)
    total = 0
    n = 4000
    for _ in range(n):
        p = rng.uniform(-50, 50, 3)
        total += len(impulses_cartesian(grid, 77, p))
    assert abs(total / n - 54.0) < 1.0


def test_canonical_order_cell_lexicographic():
    grid = CartesianGridSpec((1.0, 1.0, 1.0), 2.0)
    imps = impulses_cartesian(grid, 5, (10.5, -3.5, 0.5))
    cells = [tuple(math.floor(c) for c in imp.center) for imp in imps]
    assert cells == sorted(cells)


def test_radius_cells_validation():
    grid = CartesianGridSpec((1.0, 1.0, 1.0), 2.0)
    with pytest.raises(ParameterError):
        impulses_cartesian(grid, 5, (0, 0, 0), radius_cells=0)


def test_radius_two_superset_of_radius_one():
    grid = CartesianGridSpec((1.0, 1.0, 1.0), 2.0)
    one = {i.stream for i in impulses_cartesian(grid, 9, (3.3, 4.4, 5.5))}
    two = {i.stream for i in impulses_cartesian(grid, 9, (3.3, 4.4, 5.5), 2)}
    assert one < two
    assert len(two) > len(one)


def test_list_length_bounded_by_poisson_cap():
    # constant-time contract: the neighborhood list cannot grow without bound
    from woodtex import _fast
    grid = CartesianGridSpec((1.0, 1.0, 1.0), 2.0)
    cap = 27 * _fast.poisson_cap(2.0)
    rng = np.random.default_rng(21)
    for _ in range(500):
        p = rng.uniform(-100, 100, 3)
        assert len(impulses_cartesian(grid, 3, p)) <= cap


def test_positions_inside_generating_cell():
    grid = CartesianGridSpec((0.5, 2.0, 1.0), 3.0)
    for imp in impulses_cartesian(grid, 13, (0.1, 0.1, 0.1), 2):
        # the neighborhood covers cells [-2..2] around the query's cell
        for c, w in zip(imp.center, grid.cell_scale):
            assert -2 * w <= c < 3 * w


# --- cylindrical ----------------------------------------------------------------


def test_cylindrical_cell_volume_constant():
    grid = CylindricalGridSpec(band_thickness=1.0, z_height=1.0,
                               target_cell_volume=0.1, density=2.0)
    for band in range(1, 11):
        assert grid.cell_volume(band) == pytest.approx(0.1, rel=0.01)


def test_cylindrical_cells_in_band_formula():
    grid = CylindricalGridSpec(1.0, 1.0, 0.25, 2.0)
    for band in range(8):
        expected = max(1, round(TWO_PI * (band + 0.5) / 0.25))
        assert grid.cells_in_band(band) == expected


def test_theta_wraparound():
    grid = CylindricalGridSpec(1.0, 1.0, 0.5, 3.0)
    r = 5.5
    eps = 1e-3
    a = impulses_cylindrical(grid, 21, (r * math.cos(math.pi - eps),
                                        r * math.sin(math.pi - eps), 0.5))
    b = impulses_cylindrical(grid, 21, (r * math.cos(-math.pi + eps),
                                        r * math.sin(-math.pi + eps), 0.5))
    # impulses straddling theta = pi must be reported by both queries
    sa = {i.stream for i in a}
    sb = {i.stream for i in b}
    straddle = [i for i in a if abs(math.atan2(i.center[1], i.center[0])) > math.pi - 0.05]
    assert straddle, "expected at least one impulse near the seam"
    for imp in straddle:
        assert imp.stream in sb


def test_cylindrical_completeness_oracle():
    # brute force: every impulse of every cell adjacent (in the cell metric)
    # to the query's cell must be in the result
    grid = CylindricalGridSpec(1.0, 1.0, 0.5, 2.0)
    seed = 8
    rng = np.random.default_rng(4)
    for _ in range(25):
        r = rng.uniform(0.2, 8.0)
        th = rng.uniform(-math.pi, math.pi)
        z = rng.uniform(-4, 4)
        p = (r * math.cos(th), r * math.sin(th), z)
        got = {i.stream for i in impulses_cylindrical(grid, seed, p)}
        band = int(r / grid.band_thickness)
        slab = math.floor(z / grid.z_height)
        thq = th if th >= 0 else th + TWO_PI
        for b in range(max(0, band - 1), band + 2):
            nth = grid.cells_in_band(b)
            jq = min(int(thq / TWO_PI * nth), nth - 1)
            for dj in (-1, 0, 1):
                j = (jq + dj) % nth
                for m in (slab - 1, slab, slab + 1):
                    key = hashing.hash_u64(seed, [b, j, m])
                    n = hashing.poisson_count(hashing.u01(key), grid.density)
                    for i in range(n):
                        assert hashing.hash_u64(seed, [b, j, m, i]) in got


def test_cylindrical_centers_inside_cells():
    grid = CylindricalGridSpec(1.0, 2.0, 0.5, 2.0)
    p = (3.3, 1.1, 0.7)
    cells = set(cylindrical_neighborhood(grid, p))
    for imp in impulses_cylindrical(grid, 44, p):
        x, y, z = imp.center
        r = math.hypot(x, y)
        b = int(r / grid.band_thickness)
        th = math.atan2(y, x)
        if th < 0:
            th += TWO_PI
        nth = grid.cells_in_band(b)
        j = min(int(th / TWO_PI * nth), nth - 1)
        m = math.floor(z / grid.z_height)
        assert (b, j, m) in cells


def test_cylindrical_axis_degenerate_policy():
    grid = CylindricalGridSpec(1.0, 1.0, 0.8, 2.0)
    imps = impulses_cylindrical(grid, 3, (0.0, 0.0, 0.25))
    # every wedge of the two innermost bands, all three z slabs
    expected = set()
    for b in (0, 1):
        for j in range(grid.cells_in_band(b)):
            for m in (-1, 0, 1):
                key = hashing.hash_u64(3, [b, j, m])
                n = hashing.poisson_count(hashing.u01(key), grid.density)
                for i in range(n):
                    expected.add(hashing.hash_u64(3, [b, j, m, i]))
    assert {i.stream for i in imps} == expected


def test_impulse_streams_pure_function():
    grid = CartesianGridSpec((1.0, 1.0, 1.0), 2.0)
    imps = impulses_cartesian(grid, 123, (0.5, 0.5, 0.5))
    for imp in imps:
        assert isinstance(imp, Impulse)
        # stream of impulse j in cell (cx,cy,cz) is the canonical hash fold
        cell = tuple(math.floor(c) for c in imp.center)
        js = [hashing.hash_u64(123, list(cell) + [j]) for j in range(40)]
        assert imp.stream in js
