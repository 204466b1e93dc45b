import math

import numpy as np
import pytest

import ttcommittor as ttc

TINY = """
experiment = double_well
d = 2
basis.size = 6
quadrature.order = 200
solver.ranks = 2
solver.rho = 1, 10
solver.sweeps = 2
validate.mc_samples = 2000
validate.reference_points = 2001
validate.flow = false
validate.boundary = false
output.slice_points = 21
"""


def test_dense_round_trip():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 4, 5))
    tt = ttc.TensorTrain.from_dense(a)
    assert tt.modes == [3, 4, 5]
    assert tt.ranks[0] == 1 and tt.ranks[-1] == 1
    np.testing.assert_allclose(tt.to_dense(), a, atol=1e-12)
    assert tt([1, 2, 3]) == pytest.approx(a[1, 2, 3], abs=1e-12)
    assert tt.norm() == pytest.approx(np.linalg.norm(a), rel=1e-12)


def test_inner_and_round():
    x = ttc.TensorTrain.random([4, 4, 4, 4], [3, 3, 3], seed=1)
    y = ttc.TensorTrain.random([4, 4, 4, 4], [2, 2, 2], seed=2)
    assert ttc.tt_inner(x, y) == pytest.approx(np.vdot(x.to_dense(), y.to_dense()), rel=1e-10)
    r = ttc.tt_round(x, 1e-12)
    np.testing.assert_allclose(r.to_dense(), x.to_dense(), atol=1e-10)
    assert max(ttc.tt_round(x, 0.0, 1).ranks) == 1


def test_gauss_legendre_matches_numpy():
    nodes, weights = ttc.gauss_legendre(12, -2.0, 3.0)
    ref_x, ref_w = np.polynomial.legendre.leggauss(12)
    np.testing.assert_allclose(nodes, 0.5 + 2.5 * ref_x, atol=1e-13)
    np.testing.assert_allclose(weights, 2.5 * ref_w, atol=1e-13)
    assert sum(w * x**4 for x, w in zip(nodes, weights)) == pytest.approx((3**5 + 2**5) / 5, rel=1e-12)


def test_kernel_spectrum_is_positive_and_sorted():
    ev = np.asarray(ttc.gl_kernel_eigenvalues(0.1, 1.0 / 8.0, 1.0 / 17.0, 2.6, 120))
    assert ev[0] > 0
    assert np.all(np.diff(ev) <= 0)


def test_dense_oracle_agrees():
    r = ttc.dense_oracle_check(2, 3, 3, 2, 7)
    for key in ("energy", "H_A", "H_B", "h_B", "objective"):
        assert r[key] < 1e-10, key


def test_soft_committor_1d():
    r = ttc.soft_committor_1d(beta=1.0, sigma=0.05, rho=1e3, basis_size=60)
    assert r["l2_error"] < 1e-3
    q = np.asarray(r["q_fd"])
    assert q[0] < 0.05 and q[-1] > 0.95


def test_solve_and_validate(tmp_path):
    q = ttc.solve(TINY, tmp_path)
    assert q.dim() == 2
    assert math.isfinite(q.norm())
    assert (tmp_path / "solution.tt").exists()
    rows = ttc.validate(TINY, tmp_path, tmp_path)
    assert rows[0][0] == "relative_error_E"
    assert (tmp_path / "metrics.csv").exists()


def test_oracle_rows(tmp_path):
    rows = ttc.oracle(TINY, tmp_path)
    assert rows
    assert all(r[3] == "true" for r in rows), rows


def test_config_errors_raise():
    with pytest.raises(ttc._core.Error, match="solver.rank"):
        ttc.solve("solver.rank = 4\n", "/tmp/ttc_never")
