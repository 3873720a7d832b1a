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
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "choicoh/stochastic.hpp"
#include "choicoh/tensor_core.hpp"

namespace choicoh {

/// Outcome of checking a candidate Choi matrix J for H^A -> H^B.
struct ValidationReport {
  bool is_hermitian = false;
  double min_eigenvalue = 0.0;
  /// max |tr_B J - I_A| entry.
  double trace_condition_residual = 0.0;
  bool verdict = false;
};

inline ValidationReport validate_channel(const CMatrix& c, const DimPair& dims,
                                         double tol = kDefaultTol) {
  require_side(c, dims.total(), "validate_channel");
  ValidationReport r;
  if (!all_finite(c)) return r;
  r.is_hermitian = hermiticity_defect(c) <= tol;
  r.min_eigenvalue = min_eigenvalue(c);
  r.trace_condition_residual =
      max_abs(partial_trace(c, dims, Subsystem::A) - CMatrix::Identity(dims.dA(), dims.dA()));
  r.verdict = r.is_hermitian && r.min_eigenvalue >= -tol && r.trace_condition_residual <= tol;
  return r;
}

/// A quantum channel H^A -> H^B held by its Choi matrix
///   J = sum_{jk} |j><k| (x) phi(|j><k|),
/// so that choi()(j*dB + alpha, k*dB + beta) = phi_{jk,alpha beta}.
class Channel {
 public:
  /// Validates the Choi matrix and throws InvalidInputError if it is not a
  /// channel within tol.
  static Channel from_choi(CMatrix choi, const DimPair& dims, double tol = kDefaultTol) {
    const ValidationReport r = validate_channel(choi, dims, tol);
    if (!r.verdict) {
      throw InvalidInputError(
          "Channel: Choi matrix is not a valid channel (hermitian=" +
          std::string(r.is_hermitian ? "true" : "false") +
          ", min_eigenvalue=" + std::to_string(r.min_eigenvalue) +
          ", trace_residual=" + std::to_string(r.trace_condition_residual) + ")");
    }
    return Channel(std::move(choi), dims);
  }

  /// Shape is still checked. Use only where validity follows from construction.
  static Channel from_choi_unchecked(CMatrix choi, const DimPair& dims) {
    require_side(choi, dims.total(), "Channel");
    return Channel(std::move(choi), dims);
  }

  const DimPair& dims() const { return dims_; }
  int dA() const { return dims_.dA(); }
  int dB() const { return dims_.dB(); }
  const CMatrix& choi() const { return choi_; }

  /// phi_{jk,alpha beta} = <alpha| phi(|j><k|) |beta>
  Complex operator()(int j, int k, int alpha, int beta) const {
    return choi_(dims_.index(j, alpha), dims_.index(k, beta));
  }

 private:
  Channel(CMatrix choi, const DimPair& dims) : dims_(dims), choi_(std::move(choi)) {}

  DimPair dims_;
  CMatrix choi_;
};

/// Kraus operators M_m, each dB x dA.
struct KrausSet {
  DimPair dims;
  std::vector<CMatrix> ops;
};

/// Sum_m |M_m><M_m| with |M_m> = sum M_{m alpha j} |j alpha>. Works for any
/// linear map given by Kraus-like operators (no trace condition imposed).
inline CMatrix choi_matrix_from_kraus(const std::vector<CMatrix>& ops, const DimPair& dims) {
  const int n = dims.total();
  CMatrix choi = CMatrix::Zero(n, n);
  for (std::size_t m = 0; m < ops.size(); ++m) {
    const CMatrix& op = ops[m];
    if (op.rows() != dims.dB() || op.cols() != dims.dA()) {
      throw DimensionError("Kraus operator " + std::to_string(m) + " is " +
                           std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                           ", expected " + std::to_string(dims.dB()) + "x" +
                           std::to_string(dims.dA()));
    }
    // Column-major storage of op is exactly the |j alpha> ordering.
    const Eigen::Map<const Eigen::VectorXcd> v(op.data(), n);
    choi.noalias() += v * v.adjoint();
  }
  return choi;
}

/// Eigendecomposition-derived operators sqrt(lambda) * reshape(u). Eigenvalues
/// below drop_tol are discarded. The first non-negligible component of each
/// eigenvector is made real-positive so the output is reproducible. Operators
/// come largest eigenvalue first; within a degenerate eigenvalue (relative gap
/// <= 1e-10) by the position of that leading component.
inline std::vector<CMatrix> kraus_ops_from_choi(const CMatrix& choi, const DimPair& dims,
                                                double drop_tol = 1e-12) {
  require_side(choi, dims.total(), "kraus_from_choi");
  const CMatrix h = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const RVector& w = solver.eigenvalues();
  struct Term {
    double lambda;
    Eigen::Index lead;
    Eigen::VectorXcd u;
  };
  std::vector<Term> terms;
  for (Eigen::Index i = w.size() - 1; i >= 0; --i) {
    if (w[i] < drop_tol) continue;
    Eigen::VectorXcd u = solver.eigenvectors().col(i);
    const double scale = u.cwiseAbs().maxCoeff();
    Eigen::Index lead = 0;
    for (Eigen::Index c = 0; c < u.size(); ++c) {
      if (std::abs(u[c]) > 1e-10 * scale) {
        u *= std::conj(u[c]) / std::abs(u[c]);
        lead = c;
        break;
      }
    }
    terms.push_back({w[i], lead, std::move(u)});
  }
  // terms is in descending eigenvalue order; sort each degenerate run.
  for (std::size_t a = 0; a < terms.size();) {
    std::size_t b = a + 1;
    while (b < terms.size() &&
           terms[b - 1].lambda - terms[b].lambda <= 1e-10 * std::max(1.0, terms[a].lambda))
      ++b;
    std::stable_sort(terms.begin() + static_cast<std::ptrdiff_t>(a),
                     terms.begin() + static_cast<std::ptrdiff_t>(b),
                     [](const Term& x, const Term& y) { return x.lead < y.lead; });
    a = b;
  }
  std::vector<CMatrix> ops;
  ops.reserve(terms.size());
  for (Term& t : terms) {
    t.u *= std::sqrt(t.lambda);
    ops.emplace_back(Eigen::Map<const CMatrix>(t.u.data(), dims.dB(), dims.dA()));
  }
  return ops;
}

/// Throws DimensionError on inconsistent shapes and InvalidInputError when the
/// operators do not satisfy sum_m M_m^dagger M_m = I within tol.
inline Channel choi_from_kraus(const KrausSet& k, double tol = kDefaultTol) {
  return Channel::from_choi(choi_matrix_from_kraus(k.ops, k.dims), k.dims, tol);
}

inline KrausSet kraus_from_choi(const Channel& c) {
  return KrausSet{c.dims(), kraus_ops_from_choi(c.choi(), c.dims())};
}

/// Applies the linear map with Choi matrix `choi` to an arbitrary dA x dA
/// matrix: out_{alpha beta} = sum_{jk} x_{jk} choi[(j,alpha),(k,beta)].
inline CMatrix apply_choi(const CMatrix& choi, const DimPair& dims, const CMatrix& x) {
  require_side(x, dims.dA(), "apply_choi");
  const int dB = dims.dB();
  CMatrix out = CMatrix::Zero(dB, dB);
  for (int j = 0; j < dims.dA(); ++j)
    for (int k = 0; k < dims.dA(); ++k) {
      const Complex xjk = x(j, k);
      if (xjk == Complex(0.0, 0.0)) continue;
      out.noalias() += xjk * choi.block(j * dB, k * dB, dB, dB);
    }
  return out;
}

inline CMatrix apply_channel(const Channel& c, const CMatrix& rho, double tol = kDefaultTol) {
  require_side(rho, c.dA(), "apply_channel");
  if (hermiticity_defect(rho) > tol || std::abs(rho.trace() - Complex(1.0, 0.0)) > tol) {
    throw InvalidInputError("apply_channel: input is not a unit-trace Hermitian matrix");
  }
  return apply_choi(c.choi(), c.dims(), rho);
}

/// Choi matrix of second o first, where first: A -> B and second: B -> B':
///   (psi o phi)_{jk,a'b'} = sum_{ab} phi_{jk,ab} psi_{ab,a'b'}.
/// Linear in both arguments, so it also composes non-channel linear maps.
inline CMatrix compose_choi(const CMatrix& second, const DimPair& second_dims,
                            const CMatrix& first, const DimPair& first_dims) {
  if (first_dims.dB() != second_dims.dA()) {
    throw DimensionError("compose: output dimension " + std::to_string(first_dims.dB()) +
                         " of the first map does not match input dimension " +
                         std::to_string(second_dims.dA()) + " of the second");
  }
  require_side(first, first_dims.total(), "compose");
  require_side(second, second_dims.total(), "compose");
  const int dA = first_dims.dA();
  const int dB = first_dims.dB();
  const int dOut = second_dims.dB();
  CMatrix out = CMatrix::Zero(dA * dOut, dA * dOut);
  for (int j = 0; j < dA; ++j)
    for (int k = 0; k < dA; ++k)
      out.block(j * dOut, k * dOut, dOut, dOut) =
          apply_choi(second, second_dims, first.block(j * dB, k * dB, dB, dB));
  return out;
}

/// second o first.
inline Channel compose(const Channel& second, const Channel& first) {
  return Channel::from_choi_unchecked(
      compose_choi(second.choi(), second.dims(), first.choi(), first.dims()),
      DimPair(first.dA(), second.dB()));
}

/// Completely dephasing channel on a d-level system; Choi = sum_j |jj><jj|.
inline Channel dephasing_channel(int d) {
  const DimPair dims(d, d);
  CMatrix choi = CMatrix::Zero(d * d, d * d);
  for (int j = 0; j < d; ++j) choi(dims.index(j, j), dims.index(j, j)) = 1.0;
  return Channel::from_choi_unchecked(std::move(choi), dims);
}

inline Channel identity_channel(int d) {
  const DimPair dims(d, d);
  CMatrix choi = CMatrix::Zero(d * d, d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) choi(dims.index(j, j), dims.index(k, k)) = 1.0;
  return Channel::from_choi_unchecked(std::move(choi), dims);
}

/// rho -> V rho V^dagger for an isometry V (dB x dA, V^dagger V = I).
inline Channel isometry_channel(const CMatrix& v, double tol = kDefaultTol) {
  return choi_from_kraus(KrausSet{DimPair(static_cast<int>(v.cols()), static_cast<int>(v.rows())), {v}},
                         tol);
}

inline CMatrix hadamard() {
  CMatrix h(2, 2);
  const double s = 1.0 / std::numbers::sqrt2;
  h << s, s, s, -s;
  return h;
}

/// The incoherent channel with chi_{jj,alpha alpha} = P[j, alpha]; Kraus
/// operators sqrt(P[j,alpha]) |alpha><j|.
inline Channel classical_channel(const StochasticMatrix& p) {
  const DimPair dims(static_cast<int>(p.rows()), static_cast<int>(p.cols()));
  CMatrix choi = CMatrix::Zero(dims.total(), dims.total());
  for (int j = 0; j < dims.dA(); ++j)
    for (int a = 0; a < dims.dB(); ++a) choi(dims.index(j, a), dims.index(j, a)) = p(j, a);
  return Channel::from_choi_unchecked(std::move(choi), dims);
}

inline void require_state(const CMatrix& rho, const char* what, double tol = kDefaultTol) {
  if (!is_density_matrix(rho, tol)) {
    throw InvalidInputError(std::string(what) + ": not a valid density matrix");
  }
}

/// rho^A -> tr(rho^A) rho^B, Choi = I_A (x) rho^B.
inline Channel constant_channel(const CMatrix& rho_b, int dA, double tol = kDefaultTol) {
  require_state(rho_b, "constant_channel", tol);
  const int dB = static_cast<int>(rho_b.rows());
  return Channel::from_choi_unchecked(kron(CMatrix::Identity(dA, dA), rho_b), DimPair(dA, dB));
}

/// p * phi + (1 - p) * (rho -> rho^B).
inline Channel mixture(double p, const Channel& phi, const CMatrix& rho_b,
                       double tol = kDefaultTol) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidInputError("mixture: p = " + std::to_string(p) + " is outside [0, 1]");
  }
  if (rho_b.rows() != phi.dB()) {
    throw DimensionError("mixture: rho^B has dimension " + std::to_string(rho_b.rows()) +
                         ", channel output is " + std::to_string(phi.dB()));
  }
  const Channel constant = constant_channel(rho_b, phi.dA(), tol);
  return Channel::from_choi_unchecked(p * phi.choi() + (1.0 - p) * constant.choi(), phi.dims());
}

/// Checks phi_{jj,alpha beta} = delta_{alpha beta} phi_{jj,alpha alpha}: every
/// basis state |j><j| is sent to a diagonal output. This is the condition the
/// mixture identity relies on, not a full MIO membership test.
inline bool is_mio(const Channel& phi, double tol = kDefaultTol) {
  const int dB = phi.dB();
  for (int j = 0; j < phi.dA(); ++j) {
    const CMatrix block = phi.choi().block(j * dB, j * dB, dB, dB);
    if (max_abs(block - dephase(block)) > tol) return false;
  }
  return true;
}

}  // namespace choicoh
