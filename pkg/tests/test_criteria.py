import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_orthonormal
from hankelorder.criteria import (
    CriterionTrace,
    DegenerateCostError,
    criterion_trace,
    default_s_max,
    ester_bound,
    ester_cost,
    samos_bound,
    samos_cost,
)
from hankelorder.hankel import SvdSubspaces, hankel, svd_subspaces
from hankelorder.signal_model import add_noise, preset, synthesize


def _basis(U):
    return SvdSubspaces(np.asarray(U, dtype=complex), np.ones(U.shape[1]))


@pytest.fixture(scope="module")
def noiseless():
    return {i: svd_subspaces(hankel(synthesize(preset(i)))) for i in (1, 2, 3, 4)}


@pytest.mark.parametrize("example_id", [1, 2, 3, 4])
def test_noiseless_costs_vanish_at_true_order(noiseless, example_id):
    r = preset(example_id).order
    sub = noiseless[example_id]
    assert ester_cost(sub, r) <= 1e-8
    assert samos_cost(sub, r) <= 1e-8
    for kind in ("ester", "samos"):
        trace = criterion_trace(sub, kind)
        assert trace.argmin() == r
        assert np.all(trace.costs[np.arange(trace.costs.size) != r - 1] > trace.costs[r - 1])


def test_scalar_ester_closed_form(rng):
    U = random_orthonormal(rng, 8, 3)
    uf, ul = U[1:, 0], U[:-1, 0]
    cos = abs(np.vdot(ul, uf)) / (np.linalg.norm(ul) * np.linalg.norm(uf))
    expected = np.linalg.norm(uf) * np.sqrt(1 - cos**2)
    assert ester_cost(_basis(U), 1) == pytest.approx(expected, rel=1e-12)


def test_costs_invariant_to_column_phases(rng):
    U = random_orthonormal(rng, 11, 5)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
    for s in range(1, 6):
        assert ester_cost(_basis(U * phases), s) == pytest.approx(ester_cost(_basis(U), s), abs=1e-12)
        assert samos_cost(_basis(U * phases), s) == pytest.approx(samos_cost(_basis(U), s), abs=1e-12)


def test_costs_invariant_to_rotation_within_subspace(rng):
    U = random_orthonormal(rng, 13, 4)
    R = random_orthonormal(rng, 4, 4)
    assert ester_cost(_basis(U @ R), 4) == pytest.approx(ester_cost(_basis(U), 4), abs=1e-12)
    assert samos_cost(_basis(U @ R), 4) == pytest.approx(samos_cost(_basis(U), 4), abs=1e-12)


def test_samos_block_orthogonal_case():
    # columns e_1 and e_4 of R^7: the four shifted columns are distinct unit vectors
    U = np.eye(7)[:, [1, 4]]
    assert samos_cost(_basis(U), 2) == pytest.approx(1.0)
    assert samos_cost(_basis(np.eye(5)[:, [1]]), 1) == pytest.approx(1.0)


def test_samos_order_limit():
    with pytest.raises(ValueError):
        samos_cost(_basis(np.eye(5)), 3)


def test_bounds_identical_blocks(noiseless):
    sub = noiseless[4]
    assert ester_bound(sub, 6) == pytest.approx(0.0, abs=1e-7)
    assert samos_bound(sub, 6) == pytest.approx(np.sqrt(2), abs=1e-7)


def test_bounds_orthogonal_blocks():
    sub = _basis(np.eye(5)[:, [1]])
    assert ester_bound(sub, 1) == pytest.approx(1.0)
    assert samos_bound(sub, 1) == pytest.approx(np.sqrt(2) * (1 + np.sin(np.pi / 4)))
    assert samos_bound(sub, 1) == pytest.approx(2.414213562373095)


def test_degenerate_bottom_block():
    sub = _basis(np.eye(5)[:, [4]])
    with pytest.raises(DegenerateCostError):
        ester_cost(sub, 1)
    trace = criterion_trace(sub, "ester", s_max=1)
    assert trace.costs[0] == np.inf
    with pytest.raises(DegenerateCostError):
        trace.argmin()


def test_trace_argmin_ties_and_lower_bound():
    trace = CriterionTrace(np.array([0.5, 0.1, np.inf, 0.1, 0.3]), "ester")
    assert trace.argmin() == 2
    assert trace.argmin(lower=3) == 4
    assert trace.argmin(lower=5) == 5


def test_trace_defaults():
    assert default_s_max(65) == 32
    sub = svd_subspaces(hankel(synthesize(preset(3))))
    assert criterion_trace(sub, "samos").costs.shape == (32,)
    with pytest.raises(ValueError):
        criterion_trace(sub, "music")


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), example_id=st.sampled_from([1, 3, 4]), snr=st.floats(-5, 40))
def test_angle_bounds_hold_on_noisy_signals(seed, example_id, snr):
    spec = preset(example_id, length=41)
    noisy = add_noise(synthesize(spec), snr, rng=seed)
    sub = svd_subspaces(hankel(noisy.samples))
    for s in range(1, default_s_max(sub.m) + 1):
        e, q = ester_cost(sub, s), samos_cost(sub, s)
        assert 0 <= e <= ester_bound(sub, s) + 1e-9
        assert 0 <= q <= samos_bound(sub, s) + 1e-9
