# densemimo: uplink spectral efficiency of dense multicell massive MIMO networks
# Copyright 2026 The densemimo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
import math

import numpy as np
import pytest

import densemimo as dm


def test_moments_match_known_values():
    model = dm.MultiSlopeModel.dual_slope_default()
    assert dm.mu_kappa(model, 10.0, 1) == pytest.approx(1.01992, rel=1e-4)
    assert dm.mu_kappa(model, 10.0, 2) == pytest.approx(0.34196, rel=1e-4)
    # single slope alpha = 4: mu_1 = 2 / (alpha - 2) at any density
    assert dm.mu_kappa(dm.MultiSlopeModel.single_slope(4.0), 3.0, 1) == pytest.approx(1.0, rel=1e-12)


def test_pole_is_a_value_error():
    with pytest.raises(ValueError):
        dm.mu_kappa(dm.MultiSlopeModel.single_slope(2.0), 10.0, 1)


def test_one_ring_is_hermitian_with_trace():
    r = dm.one_ring(16, 2.0, 0.3, math.radians(10))
    assert r.shape == (16, 16)
    assert np.allclose(r, r.conj().T)
    assert np.trace(r).real == pytest.approx(32.0)
    assert np.linalg.eigvalsh(r).min() > -1e-10


def test_asymptotic_limit():
    model = dm.MultiSlopeModel.dual_slope_default()
    mu2 = dm.mu_kappa(model, 10.0, 2)
    for scheme in ("MR", "ZF"):
        s = dm.uatf_sinr(scheme, model, 10.0, 1e9, 10, 4)
        assert s == pytest.approx(4 / mu2, rel=1e-6)


def test_small_simulation_and_ase_identity():
    sc = dm.Scenario()
    sc.lambda_ = 50.0
    sc.m_antennas = 16
    sc.k_users = 4
    sc.zeta = 2
    sc.delta_deg = 10.0
    sc.trials = 3
    sc.fading_redraws = 3
    sc.estimated_cells = 4
    recs = dm.simulate(sc)
    assert [r["scheme"] for r in recs] == ["MR", "ZF", "S-MMSE", "M-MMSE"]
    for r in recs:
        assert r["ase"] == sc.lambda_ * sc.k_users * r["se"]["mean"]
        assert r["se"]["mean"] > 0
    again = dm.simulate(sc, threads=2)
    assert [r["se"]["mean"] for r in recs] == [r["se"]["mean"] for r in again]


def test_invalid_scenario_raises():
    sc = dm.Scenario()
    sc.zeta = 100
    with pytest.raises(ValueError):
        sc.validate()


def test_selftest_passes():
    results = dm.selftest()
    assert results and all(ok for _, ok, _ in results), results
