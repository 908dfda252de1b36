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
"""Uplink massive MIMO in PPP networks: closed-form moments and Monte Carlo SE."""

from ._core import (
    ConfigError,
    DomainError,
    MultiSlopeModel,
    NumericalError,
    Scenario,
    dominance_threshold,
    estimate_nmse,
    estimate_uatf_se,
    lambert_w0,
    mu_kappa,
    nmse_upper_bound,
    one_ring,
    optimal_zeta,
    path_loss,
    selftest,
    simulate,
    uatf_se,
    uatf_sinr,
    upper_incomplete_gamma,
    version,
)

__version__ = version().split()[0]
