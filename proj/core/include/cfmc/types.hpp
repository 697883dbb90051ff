// SPDX-License-Identifier: Apache-2.0
//
// cfmc: subgroup-centric multicast simulator for cell-free massive MIMO
// Copyright (C) 2026 The cfmc authors
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

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cfmc
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    struct Point
    {
        double x = 0.0;
        double y = 0.0;
        bool operator==(const Point &) const = default;
    };

    // Invalid user configuration. field() names the offending setting so the
    // CLI can report it verbatim.
    class ConfigError : public std::invalid_argument
    {
    public:
        ConfigError(std::string field, const std::string &message)
            : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
        const std::string &field() const noexcept { return field_; }

    private:
        std::string field_;
    };

    // Broken internal contract (dimension mismatch, non-Hermitian covariance,
    // finalizing an accumulator with too few samples).
    class InternalError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    // Output could not be written.
    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

    // dBm to milliwatts; every power inside the simulator is in mW.
    inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
}
