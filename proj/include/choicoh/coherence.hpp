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
#include <optional>
#include <string>

#include "choicoh/channel.hpp"
#include "choicoh/tensor_core.hpp"

namespace choicoh {

enum class Measure { l1, rel_ent };

inline std::string to_string(Measure m) { return m == Measure::l1 ? "l1" : "rel_ent"; }

inline Measure parse_measure(const std::string& s) {
  if (s == "l1") return Measure::l1;
  if (s == "rel_ent") return Measure::rel_ent;
  throw InvalidInputError("unknown coherence measure '" + s + "' (expected l1 or rel_ent)");
}

struct CoherenceValue {
  Measure measure = Measure::l1;
  double value = 0.0;
  /// Divisor applied to the Choi matrix before the state measure: |A| for a
  /// channel, |A'| for a selective branch, 1 for a state.
  double normalization = 1.0;
};

/// Sum of off-diagonal moduli.
inline CoherenceValue c_l1_state(const CMatrix& rho, double tol = kDefaultTol) {
  require_state(rho, "c_l1_state", tol);
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
      if (i != j) s += std::abs(rho(i, j));
  return {Measure::l1, s, 1.0};
}

/// S(Delta(rho)) - S(rho) in bits; small negative round-off is clamped to 0.
inline CoherenceValue c_rel_ent_state(const CMatrix& rho, double tol = kDefaultTol) {
  require_state(rho, "c_rel_ent_state", tol);
  const double v = vn_entropy(dephase(rho), tol) - vn_entropy(rho, tol);
  return {Measure::rel_ent, std::max(v, 0.0), 1.0};
}

inline CoherenceValue measure_state(const CMatrix& rho, Measure m, double tol = kDefaultTol) {
  return m == Measure::l1 ? c_l1_state(rho, tol) : c_rel_ent_state(rho, tol);
}

/// C(J / normalization); the channel measures are this with normalization |A|.
inline CoherenceValue measure_normalized(const CMatrix& j, double normalization, Measure m,
                                         double tol = kDefaultTol) {
  CoherenceValue v = measure_state(j / normalization, m, tol);
  v.normalization = normalization;
  return v;
}

inline CoherenceValue c_l1_channel(const Channel& phi, double tol = kDefaultTol) {
  return measure_normalized(phi.choi(), phi.dA(), Measure::l1, tol);
}

inline CoherenceValue c_rel_ent_channel(const Channel& phi, double tol = kDefaultTol) {
  return measure_normalized(phi.choi(), phi.dA(), Measure::rel_ent, tol);
}

inline CoherenceValue measure_channel(const Channel& phi, Measure m, double tol = kDefaultTol) {
  return measure_normalized(phi.choi(), phi.dA(), m, tol);
}

/// Measure of a selective-branch matrix j with tr j = |A'|, evaluated on
/// j / |A'|. Coincides with the channel measure when j is a true Choi matrix.
inline CoherenceValue measure_subnormalized(const CMatrix& j, int dAprime, Measure m,
                                            double tol = kDefaultTol) {
  require_square(j, "measure_subnormalized");
  if (dAprime < 1) throw DimensionError("measure_subnormalized: |A'| must be >= 1");
  if (std::abs(j.trace() - Complex(dAprime, 0.0)) > 1e-6) {
    throw InvalidInputError("measure_subnormalized: trace " + std::to_string(j.trace().real()) +
                            " differs from |A'| = " + std::to_string(dAprime));
  }
  if (!is_psd(j, tol)) throw InvalidInputError("measure_subnormalized: matrix is not PSD");
  return measure_normalized(j, dAprime, m, tol);
}

/// Phases theta_{j alpha} of an isometry |j> -> |B|^{-1/2} sum_alpha e^{i theta} |alpha>.
struct PhaseMatrix {
  RMatrix theta;  // dA x dB

  /// max_{jk} |(1/dB) sum_alpha e^{i(theta_{j alpha} - theta_{k alpha})} - delta_{jk}|
  double orthogonality_residual() const {
    const Eigen::Index dA = theta.rows();
    const Eigen::Index dB = theta.cols();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < dA; ++j)
      for (Eigen::Index k = 0; k < dA; ++k) {
        Complex s = 0.0;
        for (Eigen::Index a = 0; a < dB; ++a)
          s += std::polar(1.0, theta(j, a) - theta(k, a));
        s /= static_cast<double>(dB);
        worst = std::max(worst, std::abs(s - Complex(j == k ? 1.0 : 0.0, 0.0)));
      }
    return worst;
  }

  /// theta_{j alpha} = 2 pi j alpha / dB (0-based).
  static PhaseMatrix fourier(const DimPair& dims) {
    PhaseMatrix p{RMatrix(dims.dA(), dims.dB())};
    for (int j = 0; j < dims.dA(); ++j)
      for (int a = 0; a < dims.dB(); ++a)
        p.theta(j, a) = 2.0 * std::numbers::pi * j * a / dims.dB();
    return p;
  }
};

/// Isometry channel whose normalised Choi matrix is a maximally coherent
/// pure state. Requires |A| <= |B|; defaults to Fourier phases.
inline Channel max_coherent_channel(const DimPair& dims,
                                    const std::optional<PhaseMatrix>& theta = std::nullopt,
                                    double tol = kDefaultTol) {
  if (dims.dA() > dims.dB()) {
    throw InvalidInputError("max_coherent_channel: requires |A| <= |B|, got " + dims.str());
  }
  const PhaseMatrix phases = theta.value_or(PhaseMatrix::fourier(dims));
  if (phases.theta.rows() != dims.dA() || phases.theta.cols() != dims.dB()) {
    throw DimensionError("max_coherent_channel: phase matrix must be dA x dB");
  }
  const double residual = phases.orthogonality_residual();
  if (residual > tol) {
    throw InvalidInputError("max_coherent_channel: phases are not orthogonal (residual " +
                            std::to_string(residual) + ")");
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(dims.dB()));
  CMatrix v(dims.dB(), dims.dA());
  for (int j = 0; j < dims.dA(); ++j)
    for (int a = 0; a < dims.dB(); ++a) v(a, j) = std::polar(amp, phases.theta(j, a));
  return choi_from_kraus(KrausSet{dims, {v}}, tol);
}

/// True iff |A| * psi fails the channel trace condition tr_B J = I_A, i.e. the
/// rescaled state is not the Choi matrix of any channel.
inline bool verify_not_choi(const CMatrix& psi_state, const DimPair& dims,
                            double tol = kDefaultTol) {
  require_side(psi_state, dims.total(), "verify_not_choi");
  require_state(psi_state, "verify_not_choi", tol);
  const CMatrix scaled = static_cast<double>(dims.dA()) * psi_state;
  const double residual =
      max_abs(partial_trace(scaled, dims, Subsystem::A) - CMatrix::Identity(dims.dA(), dims.dA()));
  return residual > tol;
}

}  // namespace choicoh
