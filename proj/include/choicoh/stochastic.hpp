// Copyright 2026 The choicoh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <string>

#include "choicoh/tensor_core.hpp"

namespace choicoh {

/// Real nonnegative matrix with unit row sums: the classical skeleton of an
/// incoherent channel, P[j, alpha] = Prob(alpha | j).
class StochasticMatrix {
 public:
  /// Entries in [-tol, 0) are clamped to zero; anything more negative, or a
  /// row sum off by more than tol, throws InvalidInputError.
  explicit StochasticMatrix(RMatrix p, double tol = kDefaultTol) : p_(std::move(p)) {
    if (p_.rows() < 1 || p_.cols() < 1) {
      throw DimensionError("StochasticMatrix: empty matrix");
    }
    for (Eigen::Index j = 0; j < p_.rows(); ++j) {
      double sum = 0.0;
      for (Eigen::Index a = 0; a < p_.cols(); ++a) {
        double& x = p_(j, a);
        if (!std::isfinite(x) || x < -tol) {
          throw InvalidInputError("StochasticMatrix: entry (" + std::to_string(j) +
                                  "," + std::to_string(a) + ") is negative or not finite");
        }
        if (x < 0.0) x = 0.0;
        sum += x;
      }
      if (std::abs(sum - 1.0) > tol) {
        throw InvalidInputError("StochasticMatrix: row " + std::to_string(j) +
                                " sums to " + std::to_string(sum));
      }
    }
  }

  Eigen::Index rows() const { return p_.rows(); }
  Eigen::Index cols() const { return p_.cols(); }
  double operator()(Eigen::Index j, Eigen::Index a) const { return p_(j, a); }
  const RMatrix& matrix() const { return p_; }

 private:
  RMatrix p_;
};

}  // namespace choicoh
