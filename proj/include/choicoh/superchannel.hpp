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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "choicoh/channel.hpp"
#include "choicoh/incoherent.hpp"

namespace choicoh {

/// A superchannel Theta taking channels A -> B to channels A' -> B', held by
/// its Choi matrix
///   J = sum_{j k alpha beta} |j alpha><k beta| (x) J_{Theta(|j alpha><k beta|)}.
/// Row (j, alpha, j', alpha') sits at ((j*dB + alpha)*dA' + j')*dB' + alpha'.
///
/// The carrier does not enforce superchannel validity; construct through a
/// validated path or call validate_superchannel.
class Superchannel {
 public:
  Superchannel(CMatrix choi, const DimPair& in_dims, const DimPair& out_dims)
      : in_(in_dims), out_(out_dims), choi_(std::move(choi)) {
    require_side(choi_, static_cast<Eigen::Index>(in_.total()) * out_.total(), "Superchannel");
  }

  const DimPair& in_dims() const { return in_; }
  const DimPair& out_dims() const { return out_; }
  const CMatrix& choi() const { return choi_; }

  /// The Choi matrix read as a linear map on matrices over H^{AB} -> H^{A'B'}.
  DimPair flat_dims() const { return DimPair(in_.total(), out_.total()); }

  /// Theta_{jk,alpha beta,j'k',alpha' beta'}
  Complex operator()(int j, int k, int alpha, int beta, int jp, int kp, int ap,
                     int bp) const {
    const int n_out = out_.total();
    return choi_(in_.index(j, alpha) * n_out + out_.index(jp, ap),
                 in_.index(k, beta) * n_out + out_.index(kp, bp));
  }

 private:
  DimPair in_;
  DimPair out_;
  CMatrix choi_;
};

/// Kraus operators of a superchannel, each (dA' dB') x (dA dB), entries
/// M_{m, (j' alpha'), (j alpha)}.
struct SuperKrausSet {
  DimPair in_dims;
  DimPair out_dims;
  std::vector<CMatrix> ops;
};

struct SuperValidationReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  /// Max deviation of sum_{alpha'} Theta_{jk,alpha beta,j'k',alpha' alpha'} from
  /// delta_{alpha beta} rho^{(jk)}_{j'k'}.
  double block_trace_residual = 0.0;
  /// Max deviation of sum_j rho^{(jj)} from I_{A'}.
  double normalization_residual = 0.0;
  /// |tr J - dB dA'|.
  double trace_residual = 0.0;
  /// rho_blocks[j*dA + k] = rho^{(jk)}, a dA' x dA' matrix.
  std::vector<CMatrix> rho_blocks;
  bool verdict = false;

  const CMatrix& rho(int j, int k, int dA) const {
    return rho_blocks.at(static_cast<std::size_t>(j * dA + k));
  }
};

/// Checks J >= 0, the alpha-independence and delta_{alpha beta} structure of
/// the B'-traced blocks, their normalisation over the diagonal input blocks,
/// and tr J = |B||A'|. rho^{(jk)} is read from the alpha = beta = 0 slice.
inline SuperValidationReport validate_superchannel(const CMatrix& c, const DimPair& in_dims,
                                                   const DimPair& out_dims,
                                                   double tol = kDefaultTol) {
  const int n_out = out_dims.total();
  require_side(c, static_cast<Eigen::Index>(in_dims.total()) * n_out, "validate_superchannel");
  SuperValidationReport r;
  const int dA = in_dims.dA();
  const int dB = in_dims.dB();
  const int dAp = out_dims.dA();
  const int dBp = out_dims.dB();

  if (!all_finite(c)) return r;
  r.min_eigenvalue = min_eigenvalue(c);
  r.psd = hermiticity_defect(c) <= tol && r.min_eigenvalue >= -tol;

  // traced(j,k,alpha,beta)(j',k') = sum_{alpha'} Theta_{jk,alpha beta,j'k',alpha' alpha'}
  auto traced = [&](int j, int k, int a, int b) {
    CMatrix t = CMatrix::Zero(dAp, dAp);
    const Eigen::Index row0 = static_cast<Eigen::Index>(in_dims.index(j, a)) * n_out;
    const Eigen::Index col0 = static_cast<Eigen::Index>(in_dims.index(k, b)) * n_out;
    for (int jp = 0; jp < dAp; ++jp)
      for (int kp = 0; kp < dAp; ++kp) {
        Complex s = 0.0;
        for (int ap = 0; ap < dBp; ++ap)
          s += c(row0 + out_dims.index(jp, ap), col0 + out_dims.index(kp, ap));
        t(jp, kp) = s;
      }
    return t;
  };

  r.rho_blocks.reserve(static_cast<std::size_t>(dA * dA));
  for (int j = 0; j < dA; ++j)
    for (int k = 0; k < dA; ++k) r.rho_blocks.push_back(traced(j, k, 0, 0));

  double block_trace = 0.0;
  for (int j = 0; j < dA; ++j)
    for (int k = 0; k < dA; ++k) {
      const CMatrix& rho_jk = r.rho(j, k, dA);
      for (int a = 0; a < dB; ++a)
        for (int b = 0; b < dB; ++b) {
          if (a == 0 && b == 0) continue;
          const CMatrix t = traced(j, k, a, b);
          block_trace = std::max(block_trace, a == b ? max_abs(t - rho_jk) : max_abs(t));
        }
    }
  r.block_trace_residual = block_trace;

  CMatrix sum = CMatrix::Zero(dAp, dAp);
  for (int j = 0; j < dA; ++j) sum += r.rho(j, j, dA);
  r.normalization_residual = max_abs(sum - CMatrix::Identity(dAp, dAp));
  r.trace_residual = std::abs(c.trace() - Complex(static_cast<double>(dB * dAp), 0.0));

  r.verdict = r.psd && r.block_trace_residual <= tol && r.normalization_residual <= tol && r.trace_residual <= tol;
  return r;
}

inline SuperValidationReport validate_superchannel(const Superchannel& s,
                                                   double tol = kDefaultTol) {
  return validate_superchannel(s.choi(), s.in_dims(), s.out_dims(), tol);
}

/// Theta_{jk,alpha beta,j'k',alpha' beta'} = sum_m M_{m j'j,alpha'alpha} M*_{m k'k,beta'beta}.
/// No validity requirement is imposed.
inline Superchannel choi_from_superkraus(const SuperKrausSet& k) {
  const DimPair flat(k.in_dims.total(), k.out_dims.total());
  return Superchannel(choi_matrix_from_kraus(k.ops, flat), k.in_dims, k.out_dims);
}

/// Throws InvalidInputError if s does not validate within tol.
inline SuperKrausSet superkraus_from_choi(const Superchannel& s, double tol = kDefaultTol) {
  if (!validate_superchannel(s, tol).verdict) {
    throw InvalidInputError("superkraus_from_choi: not a valid superchannel");
  }
  return SuperKrausSet{s.in_dims(), s.out_dims(), kraus_ops_from_choi(s.choi(), s.flat_dims())};
}

/// [Theta(phi)]_{j'k',alpha'beta'} = sum phi_{jk,alpha beta} Theta_{jk,alpha beta,j'k',alpha'beta'}.
/// Both arguments are assumed valid; the image is then a channel A' -> B'.
inline Channel apply_superchannel(const Superchannel& s, const Channel& phi) {
  if (phi.dims() != s.in_dims()) {
    throw DimensionError("apply_superchannel: channel dims " + phi.dims().str() +
                         " do not match superchannel input dims " + s.in_dims().str());
  }
  return Channel::from_choi_unchecked(apply_choi(s.choi(), s.flat_dims(), phi.choi()),
                                      s.out_dims());
}

/// J_{Theta(phi)} = sum_m M_m J_phi M_m^dagger (Kraus route).
inline CMatrix apply_superkraus(const SuperKrausSet& k, const Channel& phi) {
  if (phi.dims() != k.in_dims) {
    throw DimensionError("apply_superkraus: channel dims " + phi.dims().str() +
                         " do not match superchannel input dims " + k.in_dims.str());
  }
  const int n_out = k.out_dims.total();
  CMatrix out = CMatrix::Zero(n_out, n_out);
  for (const CMatrix& m : k.ops) out.noalias() += m * phi.choi() * m.adjoint();
  return out;
}

/// One branch of a selective superchannel application.
struct SelectiveOutcome {
  double probability = 0.0;
  /// |A'| M J M^dagger / tr(M J M^dagger); empty when the branch has
  /// trace <= 1e-12.
  std::optional<CMatrix> choi;
};

/// p_m = tr(M_m J M_m^dagger) / |A'| and the renormalised branch matrices.
inline std::vector<SelectiveOutcome> selective_apply(const SuperKrausSet& k, const Channel& phi) {
  if (phi.dims() != k.in_dims) {
    throw DimensionError("selective_apply: channel dims " + phi.dims().str() +
                         " do not match superchannel input dims " + k.in_dims.str());
  }
  const double dAp = k.out_dims.dA();
  std::vector<SelectiveOutcome> out;
  out.reserve(k.ops.size());
  for (const CMatrix& m : k.ops) {
    if (m.rows() != k.out_dims.total() || m.cols() != k.in_dims.total()) {
      throw DimensionError("selective_apply: Kraus operator has the wrong shape");
    }
    CMatrix branch = m * phi.choi() * m.adjoint();
    const double t = branch.trace().real();
    if (t <= 1e-12) {
      out.push_back({0.0, std::nullopt});
      continue;
    }
    branch *= dAp / t;
    out.push_back({t / dAp, std::move(branch)});
  }
  return out;
}

/// Theta(phi) = post o phi o pre for pre: A' -> A and post: B -> B'. Built by
/// linear extension over the matrix units of the J_phi slot.
inline Superchannel sandwich_superchannel(const Channel& pre, const Channel& post) {
  const DimPair in_dims(pre.dB(), post.dA());
  const DimPair out_dims(pre.dA(), post.dB());
  const int n_in = in_dims.total();
  const int n_out = out_dims.total();
  CMatrix choi = CMatrix::Zero(static_cast<Eigen::Index>(n_in) * n_out,
                               static_cast<Eigen::Index>(n_in) * n_out);
  CMatrix unit = CMatrix::Zero(n_in, n_in);
  for (int r = 0; r < n_in; ++r)
    for (int c = 0; c < n_in; ++c) {
      unit(r, c) = 1.0;
      const CMatrix inner = compose_choi(unit, in_dims, pre.choi(), pre.dims());
      choi.block(static_cast<Eigen::Index>(r) * n_out, static_cast<Eigen::Index>(c) * n_out,
                 n_out, n_out) =
          compose_choi(post.choi(), post.dims(), inner, DimPair(out_dims.dA(), in_dims.dB()));
      unit(r, c) = 0.0;
    }
  return Superchannel(std::move(choi), in_dims, out_dims);
}

/// Kraus form of the sandwich: {P_a^T (x) Q_b} for Kraus sets {P_a} of pre and
/// {Q_b} of post.
inline SuperKrausSet sandwich_superkraus(const KrausSet& pre, const KrausSet& post) {
  SuperKrausSet k{DimPair(pre.dims.dB(), post.dims.dA()),
                  DimPair(pre.dims.dA(), post.dims.dB()),
                  {}};
  for (const CMatrix& p : pre.ops)
    for (const CMatrix& q : post.ops) k.ops.push_back(kron(p.transpose(), q));
  return k;
}

/// True iff every operator has at most one entry of modulus > tol per column.
/// Certifies the given representation only.
inline bool is_incoherent_expression(const SuperKrausSet& k, double tol = kDefaultTol) {
  for (const CMatrix& m : k.ops)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      int nonzero = 0;
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (std::abs(m(r, c)) > tol && ++nonzero > 1) return false;
    }
  return true;
}

inline constexpr std::uint64_t kDefaultMiscCap = 4096;

/// Applies s to every extreme incoherent channel (|B|^|A| of them) and checks
/// each image is incoherent; by convexity this decides maximal incoherence.
/// Throws CapExceededError when |B|^|A| > cap.
inline bool is_misc(const Superchannel& s, double tol = kDefaultTol,
                    std::uint64_t cap = kDefaultMiscCap) {
  const DimPair& in = s.in_dims();
  const std::uint64_t count = assignment_count(in);
  if (count > cap) {
    throw CapExceededError("is_misc: undecided, " + std::to_string(count) +
                           " extreme incoherent channels exceed the cap of " +
                           std::to_string(cap));
  }
  bool ok = true;
  for_each_assignment(in, [&](const DeterministicAssignment& f) {
    if (ok && !is_incoherent_channel(apply_superchannel(s, deterministic_ic(f, in)), tol)) {
      ok = false;
    }
  });
  return ok;
}

struct PreunitaryFactors {
  CMatrix u;  // dA' x dA coisometry
  CMatrix v;  // dB' x dB isometry
};

/// Splits a single superchannel Kraus operator into U (x) V. u is read as a
/// dA' x dA grid of dB' x dB blocks; the largest-norm block fixes V (scaled so
/// V^dagger V = I, largest-modulus entry real-positive) and every block must
/// be a multiple of it.
inline PreunitaryFactors preunitary_factorize(const CMatrix& u, const DimPair& in_dims,
                                              const DimPair& out_dims, double tol = kDefaultTol) {
  const int dA = in_dims.dA();
  const int dB = in_dims.dB();
  const int dAp = out_dims.dA();
  const int dBp = out_dims.dB();
  if (dA < dAp || dB > dBp) {
    throw DimensionError("preunitary_factorize: requires |A| >= |A'| and |B| <= |B'|");
  }
  if (u.rows() != out_dims.total() || u.cols() != in_dims.total()) {
    throw DimensionError("preunitary_factorize: operator is " + std::to_string(u.rows()) + "x" +
                         std::to_string(u.cols()) + ", expected " +
                         std::to_string(out_dims.total()) + "x" + std::to_string(in_dims.total()));
  }

  int best_r = 0;
  int best_c = 0;
  double best_norm = -1.0;
  for (int r = 0; r < dAp; ++r)
    for (int c = 0; c < dA; ++c) {
      const double nrm = u.block(r * dBp, c * dB, dBp, dB).norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best_r = r;
        best_c = c;
      }
    }
  if (best_norm <= tol) throw NotFactorizableError("preunitary_factorize: zero operator");

  CMatrix v = u.block(best_r * dBp, best_c * dB, dBp, dB) * (std::sqrt(double(dB)) / best_norm);
  Eigen::Index pr = 0;
  Eigen::Index pc = 0;
  v.cwiseAbs().maxCoeff(&pr, &pc);
  v *= std::conj(v(pr, pc)) / std::abs(v(pr, pc));

  CMatrix uf(dAp, dA);
  for (int r = 0; r < dAp; ++r)
    for (int c = 0; c < dA; ++c)
      uf(r, c) = (v.adjoint() * u.block(r * dBp, c * dB, dBp, dB)).trace() / double(dB);

  const double residual = max_abs(u - kron(uf, v));
  if (residual > tol) {
    throw NotFactorizableError("preunitary_factorize: not a tensor product (residual " +
                               std::to_string(residual) + ")");
  }
  const double co = max_abs(uf * uf.adjoint() - CMatrix::Identity(dAp, dAp));
  const double iso = max_abs(v.adjoint() * v - CMatrix::Identity(dB, dB));
  if (co > tol || iso > tol) {
    throw NotFactorizableError("preunitary_factorize: factors violate UU^dagger = I (" +
                               std::to_string(co) + ") or V^dagger V = I (" +
                               std::to_string(iso) + ")");
  }
  return {std::move(uf), std::move(v)};
}

/// Completely dephasing superchannel, Kraus set {|j alpha><j alpha|}.
inline SuperKrausSet upsilon_superkraus(const DimPair& dims) {
  SuperKrausSet k{dims, dims, {}};
  const int n = dims.total();
  for (int i = 0; i < n; ++i) {
    CMatrix p = CMatrix::Zero(n, n);
    p(i, i) = 1.0;
    k.ops.push_back(std::move(p));
  }
  return k;
}

inline Superchannel upsilon_superchannel(const DimPair& dims) {
  return choi_from_superkraus(upsilon_superkraus(dims));
}

inline SuperKrausSet identity_superkraus(const DimPair& dims) {
  return SuperKrausSet{dims, dims, {CMatrix::Identity(dims.total(), dims.total())}};
}

inline Superchannel identity_superchannel(const DimPair& dims) {
  return choi_from_superkraus(identity_superkraus(dims));
}

}  // namespace choicoh
