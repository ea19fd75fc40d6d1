// Copyright 2026 The phasecap Authors
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

#ifndef PHASECAP_SRC_COSINE_SYNTHESIS_HPP
#define PHASECAP_SRC_COSINE_SYNTHESIS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace phasecap::detail {

// Samples 1 + 2 sum_{n>=1} c_n cos(2 pi n j / N) at j = 0..N-1. Requires
// coefficients.size() < N / 2.
std::vector<double> synthesize_cosine_series(std::span<const double> coefficients, std::size_t n_points);

} // namespace phasecap::detail

#endif
