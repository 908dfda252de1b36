// densemimo: uplink spectral efficiency of dense multicell massive MIMO networks
// Copyright 2026 The densemimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace densemimo
{
    struct SelftestResult
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    /// Fast invariant suite: special-function identities, correlation PSD checks,
    /// ZF identity, M-MMSE optimality on small draws, moment monotonicity and the
    /// ASE identity. Deterministic; prints one line per check when `out` is given.
    std::vector<SelftestResult> run_selftest(std::ostream *out = nullptr);
} // namespace densemimo
