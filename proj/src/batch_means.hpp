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

#ifndef PHASECAP_SRC_BATCH_MEANS_HPP
#define PHASECAP_SRC_BATCH_MEANS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace phasecap::detail {

// Mean and standard error of a serially correlated sequence. Consecutive
// samples are grouped into batches whose means are treated as independent.
class BatchMeans {
public:
    explicit BatchMeans(std::size_t batch_size = 100) : batch_size_(batch_size) {}

    void add(double x)
    {
        sum_ += x;
        current_ += x;
        if (++in_batch_ == batch_size_)
            flush();
        ++count_;
    }

    // Closes a partially filled batch, e.g. at the end of a block.
    void flush()
    {
        if (in_batch_ == 0)
            return;
        batches_.push_back(current_ / static_cast<double>(in_batch_));
        weights_.push_back(static_cast<double>(in_batch_));
        current_ = 0.0;
        in_batch_ = 0;
    }

    std::int64_t count() const noexcept { return static_cast<std::int64_t>(count_); }
    double mean() const noexcept { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }

    double std_error()
    {
        flush();
        const std::size_t n = batches_.size();
        if (n < 2)
            return 0.0;
        const double m = mean();
        double ss = 0.0;
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = batches_[i] - m;
            ss += weights_[i] * d * d;
            w += weights_[i];
        }
        // Variance of a single sample-equivalent, scaled to the total count.
        const double var_batch = ss / w * static_cast<double>(n) / static_cast<double>(n - 1);
        const double mean_batch_size = w / static_cast<double>(n);
        return std::sqrt(var_batch * mean_batch_size / static_cast<double>(count_));
    }

private:
    std::size_t batch_size_;
    std::size_t in_batch_ = 0;
    std::size_t count_ = 0;
    double sum_ = 0.0;
    double current_ = 0.0;
    std::vector<double> batches_;
    std::vector<double> weights_;
};

} // namespace phasecap::detail

#endif
