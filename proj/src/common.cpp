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
#include "densemimo/common.hpp"

#include <algorithm>
#include <cctype>

namespace densemimo
{
    std::string_view to_string(Scheme scheme)
    {
        switch (scheme)
        {
        case Scheme::MR:
            return "MR";
        case Scheme::ZF:
            return "ZF";
        case Scheme::SMMSE:
            return "S-MMSE";
        case Scheme::MMMSE:
            return "M-MMSE";
        }
        return "?";
    }

    Scheme parse_scheme(std::string_view name)
    {
        std::string key;
        for (char c : name)
            if (c != '-' && c != '_')
                key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        if (key == "MR" || key == "MRC")
            return Scheme::MR;
        if (key == "ZF")
            return Scheme::ZF;
        if (key == "SMMSE")
            return Scheme::SMMSE;
        if (key == "MMMSE")
            return Scheme::MMMSE;
        throw std::invalid_argument("unknown combining scheme '" + std::string(name) + "'");
    }

    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }
    } // namespace

    std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b)
    {
        std::uint64_t h = splitmix64(master);
        h = splitmix64(h ^ splitmix64(a + 0x632BE59BD9B4E019ULL));
        h = splitmix64(h ^ splitmix64(b + 0x8CB92BA72F3D8DD7ULL));
        return h;
    }
} // namespace densemimo
