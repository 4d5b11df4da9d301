import math

import numpy as np
import pytest

from hankelorder.hankel import hankel, svd_subspaces
from hankelorder.selectors import (
    OrderSelectionError,
    count_above,
    select_constrained,
    select_ester,
    select_samos,
    select_threshold,
)
from hankelorder.signal_model import add_noise, preset, synthesize
from hankelorder.thresholds import tau_complex


def noisy_subspaces(example, snr_db, seed):
    clean = synthesize(preset(example))
    noisy = add_noise(clean, snr_db, "complex", np.random.default_rng(seed))
    return svd_subspaces(hankel(noisy.samples)), noisy.eta


def test_count_above_examples():
    sv = [5.0, 3.0, 3.0, 1.0]
    assert count_above(sv, 3.0) == 1
    assert count_above(sv, 2.9) == 3
    assert count_above(sv, 10.0) == 0
    assert count_above([], 1.0) == 0


def test_count_above_zero_tau_gives_numerical_rank():
    sv = np.array([2.0, 1.0, 1e-17, 0.0])
    assert count_above(sv, 0.0) == 2


@pytest.mark.parametrize("bad", [[1.0, 2.0], [1.0, -0.5], [[1.0]]])
def test_count_above_rejects_unsorted(bad):
    with pytest.raises(ValueError):
        count_above(bad, 0.5)


def test_negative_tau():
    with pytest.raises(ValueError):
        select_threshold([1.0], -1.0)


@pytest.mark.parametrize("example", [1, 2, 4])
def test_noiseless_rules_recover_order(example):
    spec = preset(example)
    sub = svd_subspaces(hankel(synthesize(spec)))
    assert select_threshold(sub.singular_values, 0.0).r_hat == spec.order
    assert select_ester(sub).r_hat == spec.order
    assert select_samos(sub).r_hat == spec.order
    for criterion in ("ester", "samos"):
        res = select_constrained(sub, 0.0, criterion)
        assert res.r_hat == spec.order and res.s_star == spec.order


def test_threshold_result_fields():
    res = select_threshold([4.0, 2.0, 0.5], 1.0)
    assert res.r_hat == 2 and res.tau_used == 1.0 and res.trace is None
    assert res.to_dict()["rule"] == "threshold"


def test_constrained_infinite_tau_gives_zero():
    sub, _ = noisy_subspaces(1, 20.0, 0)
    res = select_constrained(sub, math.inf)
    assert res.r_hat == 0 and res.s_star == 0


def test_constrained_zero_tau_exceeds_s_max_on_noise():
    sub, _ = noisy_subspaces(1, 20.0, 0)
    with pytest.raises(OrderSelectionError, match="s_max"):
        select_constrained(sub, 0.0)


@pytest.mark.parametrize("seed", range(10))
def test_constrained_respects_lower_bound(seed):
    sub, eta = noisy_subspaces(4, 10.0, seed)
    tau = tau_complex(sub.m, sub.rank_bound, eta)
    res = select_constrained(sub, tau, "samos")
    assert res.s_star == select_threshold(sub.singular_values, tau).r_hat
    assert res.s_star <= res.r_hat <= 32
    free = select_samos(sub, trace=res.trace).r_hat
    if free >= res.s_star:
        assert res.r_hat == free


def test_constrained_reuses_trace():
    sub, eta = noisy_subspaces(1, 25.0, 3)
    tau = tau_complex(sub.m, sub.rank_bound, eta)
    trace = select_ester(sub).trace
    assert select_constrained(sub, tau, "ester", trace=trace).r_hat == select_constrained(sub, tau, "ester").r_hat
    with pytest.raises(ValueError):
        select_constrained(sub, tau, "samos", trace=trace)


def test_constrained_unknown_criterion():
    sub, _ = noisy_subspaces(1, 25.0, 3)
    with pytest.raises(ValueError):
        select_constrained(sub, 1.0, "music")
