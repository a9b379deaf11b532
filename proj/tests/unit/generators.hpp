// SPDX-License-Identifier: Apache-2.0
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
//
// Small random generators for property tests. Each property runs a fixed
// number of cases from a fixed seed; a failing case reports its index.

#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "core_model.hpp"

namespace gen {

class Gen
{
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

    double log_uniform(double lo, double hi)
    {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    int integer(int lo, int hi)
    {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    bool coin() { return integer(0, 1) == 1; }

    /// Scenario with every scale drawn over a few decades around the defaults.
    mmbeam::SystemParams params()
    {
        mmbeam::SystemParams p;
        p.w_tot = log_uniform(1e8, 1e10);
        p.lambda = log_uniform(1e-3, 1e-2);
        p.n0 = log_uniform(1e-22, 1e-19);
        p.delta_s = log_uniform(1e-6, 1e-4);
        p.d = log_uniform(1.0, 100.0);
        p.xi = uniform(0.1, 1.0);
        p.phi = log_uniform(1.0, 100.0);
        p.p_max = log_uniform(1e-6, 1e-1);
        return p;
    }

    std::mt19937_64& engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

/// Runs body(gen, case_index) n times with a trace naming the case.
template <class F>
void for_all(int n, std::uint64_t seed, F&& body)
{
    Gen g(seed);
    for (int i = 0; i < n; ++i)
    {
        SCOPED_TRACE("case " + std::to_string(i) + " seed " + std::to_string(seed));
        body(g, i);
        if (::testing::Test::HasFatalFailure())
        {
            return;
        }
    }
}

inline double rel(double a, double b)
{
    double const s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace gen
