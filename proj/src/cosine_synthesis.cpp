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

#include "cosine_synthesis.hpp"

#include "phasecap/error.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace phasecap::detail {

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

// FFTW planning is not thread-safe; plans are created once per size under a
// lock and then executed with new-array execution, which is.
fftw_plan plan_for(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, PlanPtr> plans;
    std::lock_guard lock(mutex);
    auto it = plans.find(n);
    if (it != plans.end())
        return it->second.get();
    FftwBuffer in((n / 2 + 1) * sizeof(fftw_complex));
    FftwBuffer out(n * sizeof(double));
    fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n), static_cast<fftw_complex*>(in.ptr),
                                       static_cast<double*>(out.ptr), FFTW_ESTIMATE);
    if (p == nullptr)
        throw NumericError("FFTW could not create a plan");
    plans.emplace(n, PlanPtr(p));
    return p;
}

} // namespace

std::vector<double> synthesize_cosine_series(std::span<const double> coefficients, std::size_t n_points)
{
    if (coefficients.size() + 1 >= n_points / 2)
        throw DomainError("cosine series too long for the synthesis grid");
    FftwBuffer in((n_points / 2 + 1) * sizeof(fftw_complex));
    FftwBuffer out(n_points * sizeof(double));
    auto* spectrum = static_cast<fftw_complex*>(in.ptr);
    for (std::size_t k = 0; k <= n_points / 2; ++k) {
        spectrum[k][0] = 0.0;
        spectrum[k][1] = 0.0;
    }
    spectrum[0][0] = 1.0;
    for (std::size_t n = 0; n < coefficients.size(); ++n)
        spectrum[n + 1][0] = coefficients[n];
    fftw_execute_dft_c2r(plan_for(n_points), spectrum, static_cast<double*>(out.ptr));
    const auto* samples = static_cast<const double*>(out.ptr);
    return {samples, samples + n_points};
}

} // namespace phasecap::detail
