import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelorder.hankel import HankelShape, hankel
from hankelorder.signal_model import Mode, SignalSpec, add_noise, preset, preset_json, synthesize


def test_unit_pole_is_constant():
    spec = SignalSpec([Mode(0.0, 0.0, 1.0, 0.0)], length=4, dt=1.0)
    np.testing.assert_allclose(synthesize(spec), [1, 1, 1, 1])


def test_conjugate_pair_gives_cosine():
    spec = SignalSpec([Mode(0.25, 0.0, 0.5), Mode(-0.25, 0.0, 0.5)], length=4, dt=1.0)
    np.testing.assert_allclose(synthesize(spec), [1, 0, -1, 0], atol=1e-15)


def test_single_damped_sample():
    # exp(-0.02 pi) exp(0.4 pi j), evaluated with mpmath at 50 digits
    spec = SignalSpec([Mode(0.2, -0.01, 1.0, 0.0)], length=2, dt=1.0)
    x = synthesize(spec)
    assert x[1] == pytest.approx(0.29019828197485801 + 0.89313847495056280j, abs=1e-14)


def test_empty_modes_give_zeros():
    np.testing.assert_array_equal(synthesize(SignalSpec([], length=5)), np.zeros(5))


@pytest.mark.parametrize("field", ["nu", "gamma", "amp_mag", "amp_phase"])
def test_non_finite_mode_rejected(field):
    values = dict(nu=0.1, gamma=0.0, amp_mag=1.0, amp_phase=0.0)
    values[field] = math.nan
    with pytest.raises(ValueError):
        Mode(**values)


def test_negative_amplitude_rejected():
    with pytest.raises(ValueError):
        Mode(0.1, 0.0, -1.0)


def test_presets_match_table():
    assert [preset(i).order for i in (1, 2, 3, 4)] == [4, 9, 5, 6]
    assert preset(1).modes[0] == Mode(-7.68, -0.274, 0.4, -0.93)
    assert preset(3).modes[2] == Mode(-0.2, -0.1, 2.0, 0.0)
    assert preset(2).modes[8] == Mode(99.84, -0.221, 0.9, 0.007)
    assert preset(4).modes[1] == Mode(-0.17, -0.0037, 1.58, 2.89)


def test_preset_overrides_and_errors():
    spec = preset(3, length=33, dt=0.5)
    assert (spec.length, spec.dt) == (33, 0.5)
    with pytest.raises(ValueError):
        preset(5)


def test_preset_json_round_trip():
    import json

    data = json.loads(preset_json(2))
    assert data["example_id"] == 2
    assert set(data) == {"example_id", "dt", "length", "modes"}
    assert set(data["modes"][0]) == {"nu", "gamma", "amp_mag", "amp_phase"}
    assert SignalSpec.from_dict(data) == preset(2)


@pytest.mark.parametrize("example_id", [1, 2, 3, 4])
def test_preset_hankel_rank_equals_order(example_id):
    spec = preset(example_id)
    H = hankel(synthesize(spec), HankelShape.square(spec.length))
    sv = np.linalg.svd(H, compute_uv=False)
    assert np.count_nonzero(sv > 1e-8 * sv[0]) == spec.order


def test_noiseless_limit():
    x = synthesize(preset(3))
    noisy = add_noise(x, math.inf, rng=0)
    assert noisy.eta == 0.0
    np.testing.assert_array_equal(noisy.samples, x)


def test_unit_power_at_zero_db():
    x = np.exp(2j * np.pi * 0.1 * np.arange(64))
    assert add_noise(x, 0.0, rng=1).eta == pytest.approx(1.0)


@pytest.mark.parametrize("kind", ["complex", "real"])
def test_noise_variance_matches_eta(kind):
    x = synthesize(preset(3))
    rng = np.random.default_rng(3)
    draws = [add_noise(x, 10.0, kind=kind, rng=rng) for _ in range(100_000 // x.size + 1)]
    eta = draws[0].eta
    w = np.concatenate([d.samples - d.clean for d in draws])
    assert w.size >= 100_000
    assert np.mean(np.abs(w) ** 2) == pytest.approx(eta**2, rel=0.02)
    if kind == "complex":
        assert np.var(w.real) == pytest.approx(eta**2 / 2, rel=0.03)
        assert np.var(w.imag) == pytest.approx(eta**2 / 2, rel=0.03)
    else:
        assert np.all(w.imag == 0)


def test_add_noise_errors():
    with pytest.raises(ValueError):
        add_noise(np.zeros(8), 10.0)
    with pytest.raises(ValueError):
        add_noise(np.ones(8), 10.0, kind="pink")


def test_add_noise_deterministic():
    x = synthesize(preset(4))
    a = add_noise(x, 5.0, rng=np.random.default_rng(9))
    b = add_noise(x, 5.0, rng=np.random.default_rng(9))
    np.testing.assert_array_equal(a.samples, b.samples)


@settings(max_examples=30, deadline=None)
@given(alpha=st.floats(0.01, 100.0))
def test_amplitude_scaling(alpha):
    spec = preset(4)
    scaled = SignalSpec(
        [Mode(m.nu, m.gamma, m.amp_mag * alpha, m.amp_phase) for m in spec.modes], spec.length, spec.dt
    )
    np.testing.assert_allclose(synthesize(scaled), alpha * synthesize(spec), rtol=1e-12, atol=1e-12)
