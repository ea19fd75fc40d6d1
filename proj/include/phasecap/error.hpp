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

#ifndef PHASECAP_ERROR_HPP
#define PHASECAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace phasecap {

// All library failures derive from Error; the C API maps each subclass to a
// status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A channel input exceeded the peak-power constraint.
class ConstraintError : public Error {
public:
    ConstraintError(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class RankError : public Error {
public:
    using Error::Error;
};

// Non-finite or underflowed intermediate in a numerical recursion.
class NumericError : public Error {
public:
    using Error::Error;
};

// Line search did not converge; carries the best point seen.
class OptimizationError : public NumericError {
public:
    OptimizationError(const std::string& what, double best_x, double best_value)
        : NumericError(what), best_x_(best_x), best_value_(best_value) {}
    double best_x() const noexcept { return best_x_; }
    double best_value() const noexcept { return best_value_; }

private:
    double best_x_;
    double best_value_;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace phasecap

#endif
