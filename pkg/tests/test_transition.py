import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transition_lab.forms import QuadraticForm, reflection_in_hyperplane
from transition_lab.gallery import make_family
from transition_lab.transition import (
    IsometryPath, NoTransitionalLimit, RescalingMap, conjugate, is_euclidean_block, is_hp_block,
    limit_conjugated_isometry, reflection_path, rescale_point, surface_limit_check,
)


def test_rescaling_matrices():
    assert np.allclose(RescalingMap("gamma", 0.5, 2).diagonal(), [1, 2, 2])
    assert np.allclose(RescalingMap("eta", 0.5, 3).diagonal(), [1, 1, 1, 2])
    with pytest.raises(ValueError):
        RescalingMap("eta", 0.0, 2)
    with pytest.raises(ValueError):
        RescalingMap("delta", 0.5, 2)


@given(st.floats(0.01, 2), st.lists(st.floats(-3, 3), min_size=9, max_size=9))
def test_conjugate_is_matrix_product(t, entries):
    r = RescalingMap("gamma", t, 2)
    M = np.array(entries).reshape(3, 3)
    assert np.allclose(conjugate(r, M), r.matrix @ M @ np.linalg.inv(r.matrix))


def test_rescale_point():
    p = rescale_point(RescalingMap("gamma", 0.1, 2), [1, 0.1, 0.05])
    assert np.allclose(p.coords, [1, 1, 0.5])


def _boost(t):
    c, s = math.cosh(t), math.sinh(t)
    return np.array([[c, s, 0], [s, c, 0], [0, 0, 1.0]])


def test_boost_gamma_limit_is_translation():
    # boosts by t, zoomed in by gamma, tend to the translation by 1
    L = limit_conjugated_isometry(IsometryPath(_boost, name="boost"), "gamma", "pos")
    M = L.matrix / L.matrix[0, 0]
    assert np.allclose(M, [[1, 0, 0], [1, 1, 0], [0, 0, 1]], atol=1e-6)
    assert is_euclidean_block(M)


def test_divergent_path_has_no_limit():
    def spin(t):
        c, s = math.cos(1 / t), math.sin(1 / t)
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])

    path = IsometryPath(spin, name="spin")
    with pytest.raises(NoTransitionalLimit):
        limit_conjugated_isometry(path, "gamma", "pos")


@pytest.mark.parametrize("side", ["pos", "neg"])
def test_reflection_limits_of_collapsing_octahedron(side):
    rec = make_family("oct_collapse")
    forms = {1: rec.form(0.5), -1: rec.form(-0.5)}
    for w in rec.walls:
        L = limit_conjugated_isometry(reflection_path(w, forms), "eta", side)
        assert is_hp_block(L.matrix), w.label


@settings(deadline=None, max_examples=20)
@given(st.floats(0.01, 0.3))
def test_reflection_path_matches_direct(t):
    rec = make_family("oct_collapse")
    w = rec.walls[1]
    forms = {1: rec.form(0.5), -1: rec.form(-0.5)}
    direct = reflection_in_hyperplane(QuadraticForm.hyperbolic(3), w.evaluate(t)).matrix
    assert np.allclose(reflection_path(w, forms)(t), direct)


def _surface_gap_oracle(t, n=2, samples=200, seed=3):
    # lift sample points of the hyperboloid and rescale them directly
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        y = rng.uniform(-1, 1, size=n)
        y = y / max(1.0, np.linalg.norm(y))
        x = np.concatenate([[math.sqrt(1 + (t * t) * y @ y)], t * y])
        g = RescalingMap("gamma", t, n).diagonal() * x
        worst = max(worst, abs(g[0] - 1))
    return worst


@pytest.mark.parametrize("t", [0.2, 0.05, 0.01])
def test_surface_gap_against_oracle(t):
    ours = surface_limit_check("H", "gamma", t, samples=400, seed=0)
    oracle = _surface_gap_oracle(t, samples=400)
    # both are sample maxima of the same O(t^2) gap
    assert ours <= t * t and oracle <= t * t
    assert ours == pytest.approx(oracle, rel=0.1)


def test_surface_gap_rate():
    a = surface_limit_check("AdS", "eta", 0.02)
    b = surface_limit_check("AdS", "eta", 0.01)
    assert a / b == pytest.approx(4, rel=0.05)
    with pytest.raises(ValueError):
        surface_limit_check("S", "eta", 0.1)


def test_block_shapes():
    assert is_hp_block(np.array([[1, 0, 0], [0, 1, 0], [2, 0, -1.0]]))
    assert not is_hp_block(np.array([[1, 0, 1], [0, 1, 0], [0, 0, 1.0]]))
    assert not is_euclidean_block(_boost(0.3))
