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

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "choicoh/errors.hpp"

namespace choicoh {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Default tolerance for Hermiticity, PSD and trace conditions.
inline constexpr double kDefaultTol = 1e-9;

/// Dimensions (|A|, |B|) of a bipartite space H^A (x) H^B. The composite
/// basis index of |j>|alpha> is j * dB + alpha.
class DimPair {
 public:
  DimPair() = default;
  DimPair(int a, int b) : dA_(a), dB_(b) {
    if (a < 1 || b < 1) {
      throw DimensionError("DimPair: dimensions must be >= 1, got (" +
                           std::to_string(a) + "," + std::to_string(b) + ")");
    }
  }

  int dA() const { return dA_; }
  int dB() const { return dB_; }
  int total() const { return dA_ * dB_; }
  int index(int j, int alpha) const { return j * dB_ + alpha; }

  friend bool operator==(const DimPair&, const DimPair&) = default;

  std::string str() const {
    return "(" + std::to_string(dA_) + "," + std::to_string(dB_) + ")";
  }

 private:
  int dA_ = 1;
  int dB_ = 1;
};

enum class Subsystem { A, B };

inline void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

inline void require_side(const CMatrix& m, Eigen::Index side, const char* what) {
  if (m.rows() != side || m.cols() != side) {
    throw DimensionError(std::string(what) + ": expected " +
                         std::to_string(side) + "x" + std::to_string(side) +
                         " matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// Largest entry modulus; zero for an empty matrix.
inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const CMatrix& m) {
  require_square(m, "hermiticity_defect");
  return max_abs(m - m.adjoint());
}

/// (a (x) b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l]
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline CMatrix partial_trace(const CMatrix& m, const DimPair& dims, Subsystem keep) {
  require_side(m, dims.total(), "partial_trace");
  const int dA = dims.dA();
  const int dB = dims.dB();
  if (keep == Subsystem::A) {
    CMatrix out = CMatrix::Zero(dA, dA);
    for (int j = 0; j < dA; ++j)
      for (int k = 0; k < dA; ++k)
        for (int a = 0; a < dB; ++a) out(j, k) += m(j * dB + a, k * dB + a);
    return out;
  }
  CMatrix out = CMatrix::Zero(dB, dB);
  for (int j = 0; j < dA; ++j)
    out += m.block(j * dB, j * dB, dB, dB);
  return out;
}

/// Keeps the diagonal in the fixed basis and zeroes everything else.
inline CMatrix dephase(const CMatrix& m) {
  require_square(m, "dephase");
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  out.diagonal() = m.diagonal();
  return out;
}

/// Eigenvalues (ascending) of the Hermitian part of m.
inline RVector hermitian_eigenvalues(const CMatrix& m) {
  require_square(m, "hermitian_eigenvalues");
  if (m.rows() == 0) return RVector();
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline double min_eigenvalue(const CMatrix& m) {
  const RVector w = hermitian_eigenvalues(m);
  return w.size() == 0 ? 0.0 : w.minCoeff();
}

/// Throws InvalidInputError when m is not Hermitian within tol.
inline bool is_psd(const CMatrix& m, double tol = kDefaultTol) {
  if (hermiticity_defect(m) > tol) {
    throw InvalidInputError("is_psd: matrix is not Hermitian within tolerance");
  }
  return min_eigenvalue(m) >= -tol;
}

/// Hermitian, PSD and unit trace, each within tol.
inline bool is_density_matrix(const CMatrix& rho, double tol = kDefaultTol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
  if (!all_finite(rho)) return false;
  if (hermiticity_defect(rho) > tol) return false;
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > tol) return false;
  return min_eigenvalue(rho) >= -tol;
}

/// Von Neumann entropy in bits. Eigenvalues in [-tol, 0) are clamped to zero.
inline double vn_entropy(const CMatrix& rho, double tol = kDefaultTol) {
  require_square(rho, "vn_entropy");
  if (!is_density_matrix(rho, tol)) {
    throw InvalidInputError("vn_entropy: not a density matrix");
  }
  const RVector w = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double lambda = std::max(w[i], 0.0);
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return s;
}

}  // namespace choicoh
