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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "choicoh/channel.hpp"
#include "choicoh/stochastic.hpp"

namespace choicoh {

/// A total map f: {0..dA-1} -> {0..dB-1}; labels an extreme incoherent channel.
class DeterministicAssignment {
 public:
  DeterministicAssignment() = default;
  DeterministicAssignment(std::vector<int> targets, int codomain)
      : targets_(std::move(targets)), codomain_(codomain) {
    if (codomain_ < 1) throw DimensionError("DeterministicAssignment: empty codomain");
    for (std::size_t j = 0; j < targets_.size(); ++j) {
      if (targets_[j] < 0 || targets_[j] >= codomain_) {
        throw DimensionError("DeterministicAssignment: f(" + std::to_string(j) + ") = " +
                             std::to_string(targets_[j]) + " outside [0," +
                             std::to_string(codomain_) + ")");
      }
    }
  }

  int operator()(int j) const { return targets_.at(static_cast<std::size_t>(j)); }
  int domain() const { return static_cast<int>(targets_.size()); }
  int codomain() const { return codomain_; }
  const std::vector<int>& targets() const { return targets_; }

  /// 0/1 row-stochastic matrix with a single 1 per row at column f(j).
  RMatrix matrix() const {
    RMatrix d = RMatrix::Zero(domain(), codomain_);
    for (int j = 0; j < domain(); ++j) d(j, targets_[static_cast<std::size_t>(j)]) = 1.0;
    return d;
  }

  friend bool operator==(const DeterministicAssignment&, const DeterministicAssignment&) = default;

 private:
  std::vector<int> targets_;
  int codomain_ = 1;
};

/// P = sum_l weights[l] * terms[l].matrix().
struct ConvexDecomposition {
  std::vector<double> weights;
  std::vector<DeterministicAssignment> terms;

  RMatrix reconstruct() const {
    if (terms.empty()) return RMatrix();
    RMatrix p = RMatrix::Zero(terms.front().domain(), terms.front().codomain());
    for (std::size_t l = 0; l < terms.size(); ++l) p += weights[l] * terms[l].matrix();
    return p;
  }
};

/// Upsilon(phi) = Delta^B o phi o Delta^A. Only the entries phi_{jj,alpha alpha}
/// survive, and they sit on the Choi diagonal, so this is a Choi dephasing.
inline Channel upsilon(const Channel& phi) {
  return Channel::from_choi_unchecked(dephase(phi.choi()), phi.dims());
}

/// phi is incoherent iff its Choi matrix is diagonal.
inline bool is_incoherent_channel(const Channel& phi, double tol = kDefaultTol) {
  return max_abs(phi.choi() - dephase(phi.choi())) <= tol;
}

/// Choi = sum_j |j, f(j)><j, f(j)|.
inline Channel deterministic_ic(const DeterministicAssignment& f, const DimPair& dims) {
  if (f.domain() != dims.dA() || f.codomain() != dims.dB()) {
    throw DimensionError("deterministic_ic: assignment maps " + std::to_string(f.domain()) +
                         " -> " + std::to_string(f.codomain()) + " but dims are " + dims.str());
  }
  CMatrix choi = CMatrix::Zero(dims.total(), dims.total());
  for (int j = 0; j < dims.dA(); ++j) {
    const int i = dims.index(j, f(j));
    choi(i, i) = 1.0;
  }
  return Channel::from_choi_unchecked(std::move(choi), dims);
}

/// Number of maps {0..dA-1} -> {0..dB-1}, or UINT64_MAX if it overflows.
inline std::uint64_t assignment_count(const DimPair& dims) {
  std::uint64_t n = 1;
  for (int j = 0; j < dims.dA(); ++j) {
    if (n > UINT64_MAX / static_cast<std::uint64_t>(dims.dB())) return UINT64_MAX;
    n *= static_cast<std::uint64_t>(dims.dB());
  }
  return n;
}

/// Visits every assignment in lexicographic order (f(0) most significant).
template <typename Fn>
void for_each_assignment(const DimPair& dims, Fn&& fn) {
  std::vector<int> t(static_cast<std::size_t>(dims.dA()), 0);
  while (true) {
    fn(DeterministicAssignment(t, dims.dB()));
    int pos = dims.dA() - 1;
    while (pos >= 0 && ++t[static_cast<std::size_t>(pos)] == dims.dB()) {
      t[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

namespace detail {
inline constexpr double kDecompositionZero = 1e-12;
}

/// Greedy decomposition of a row-stochastic matrix into deterministic
/// matrices. Each step picks, in every row, the largest column index that
/// attains the row maximum; subtracts kappa = min over rows of those maxima
/// at the picked positions; and records (kappa, picks). Residual entries
/// with magnitude <= 1e-12 count as zero. Every step zeroes at least one more
/// entry, so at most m(n-1)+1 terms are produced.
inline ConvexDecomposition decompose_row_stochastic(const StochasticMatrix& p) {
  using detail::kDecompositionZero;
  const Eigen::Index m = p.rows();
  const Eigen::Index n = p.cols();
  RMatrix r = p.matrix();
  auto count_zeros = [&]() {
    Eigen::Index z = 0;
    for (Eigen::Index i = 0; i < r.size(); ++i) z += (r.data()[i] == 0.0) ? 1 : 0;
    return z;
  };
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (std::abs(r.data()[i]) <= kDecompositionZero) r.data()[i] = 0.0;

  ConvexDecomposition out;
  Eigen::Index zeros = count_zeros();
  while (r.maxCoeff() > kDecompositionZero) {
    std::vector<int> picks(static_cast<std::size_t>(m));
    double kappa = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m; ++j) {
      const double row_max = r.row(j).maxCoeff();
      Eigen::Index best = 0;
      for (Eigen::Index a = n - 1; a >= 0; --a) {
        if (r(j, a) >= row_max - kDecompositionZero) {
          best = a;
          break;
        }
      }
      picks[static_cast<std::size_t>(j)] = static_cast<int>(best);
      kappa = std::min(kappa, r(j, best));
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      double& x = r(j, picks[static_cast<std::size_t>(j)]);
      x -= kappa;
      if (std::abs(x) <= kDecompositionZero) x = 0.0;
    }
    const Eigen::Index now = count_zeros();
    if (now <= zeros) {
      throw std::logic_error("decompose_row_stochastic: iteration did not add a zero entry");
    }
    zeros = now;
    out.weights.push_back(kappa);
    out.terms.emplace_back(std::move(picks), static_cast<int>(n));
  }
  return out;
}

/// Convex decomposition of an incoherent channel into extreme incoherent
/// channels deterministic_ic(terms[l]). Throws InvalidInputError if chi is not
/// incoherent within tol.
inline ConvexDecomposition ic_decompose(const Channel& chi, double tol = kDefaultTol) {
  if (!is_incoherent_channel(chi, tol)) {
    throw InvalidInputError("ic_decompose: channel is not incoherent");
  }
  const DimPair& dims = chi.dims();
  RMatrix p(dims.dA(), dims.dB());
  for (int j = 0; j < dims.dA(); ++j)
    for (int a = 0; a < dims.dB(); ++a)
      p(j, a) = chi.choi()(dims.index(j, a), dims.index(j, a)).real();
  return decompose_row_stochastic(StochasticMatrix(std::move(p), tol));
}

}  // namespace choicoh
