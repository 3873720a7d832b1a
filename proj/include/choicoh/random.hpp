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
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "choicoh/channel.hpp"
#include "choicoh/incoherent.hpp"
#include "choicoh/superchannel.hpp"

namespace choicoh {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream owned by one trial of one property.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + trial);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = Complex(normal(rng), normal(rng));
  return g;
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal pushed into Q.
inline CMatrix haar_unitary(int n, Rng& rng) {
  const CMatrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// rows x cols with V^dagger V = I (rows >= cols).
inline CMatrix random_isometry(int rows, int cols, Rng& rng) {
  if (rows < cols) throw DimensionError("random_isometry: requires rows >= cols");
  return haar_unitary(rows, rng).leftCols(cols);
}

/// rows x cols with U U^dagger = I (rows <= cols).
inline CMatrix random_coisometry(int rows, int cols, Rng& rng) {
  return random_isometry(cols, rows, rng).adjoint();
}

/// Random density matrix G G^dagger / tr with G of random rank in [1, d].
inline CMatrix random_state(int d, Rng& rng) {
  const int rank = uniform_int(rng, 1, d);
  const CMatrix g = gaussian_matrix(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline std::vector<double> random_simplex(int n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = e(rng);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return w;
}

/// Rows drawn uniformly from the probability simplex.
inline StochasticMatrix random_stochastic(int m, int n, Rng& rng) {
  RMatrix p(m, n);
  for (int j = 0; j < m; ++j) {
    const std::vector<double> row = random_simplex(n, rng);
    for (int a = 0; a < n; ++a) p(j, a) = row[static_cast<std::size_t>(a)];
  }
  return StochasticMatrix(std::move(p));
}

/// Random injective map {0..n-1} -> {0..m-1} (n <= m).
inline std::vector<int> random_injection(int n, int m, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  perm.resize(static_cast<std::size_t>(n));
  return perm;
}

/// Random channel from a Haar isometry A -> B (x) E followed by tracing out E.
/// The environment dimension is drawn from [ceil(dA/dB), max(ceil(dA/dB), dB)],
/// the smallest range for which the isometry exists.
inline Channel random_channel(const DimPair& dims, Rng& rng) {
  const int dA = dims.dA();
  const int dB = dims.dB();
  const int e_min = (dA + dB - 1) / dB;
  const int dE = uniform_int(rng, e_min, std::max(e_min, dB));
  const CMatrix w = random_isometry(dB * dE, dA, rng);
  KrausSet k{dims, {}};
  for (int e = 0; e < dE; ++e) {
    CMatrix op(dB, dA);
    for (int a = 0; a < dB; ++a) op.row(a) = w.row(a * dE + e);
    k.ops.push_back(std::move(op));
  }
  return Channel::from_choi_unchecked(choi_matrix_from_kraus(k.ops, dims), dims);
}

/// Haar isometry channel (dA <= dB).
inline Channel random_isometry_channel(const DimPair& dims, Rng& rng) {
  const CMatrix v = random_isometry(dims.dB(), dims.dA(), rng);
  return Channel::from_choi_unchecked(choi_matrix_from_kraus({v}, dims), dims);
}

inline Channel random_ic_channel(const DimPair& dims, Rng& rng) {
  return classical_channel(random_stochastic(dims.dA(), dims.dB(), rng));
}

/// Incoherent channel A' -> A (dAp <= dA) whose column sums
/// sum_{j'} chi_{j'j',jj} are at most 1: a convex mixture of one to three
/// injective deterministic maps.
inline Channel random_subnormalized_ic(int dAp, int dA, Rng& rng) {
  if (dAp > dA) throw DimensionError("random_subnormalized_ic: requires |A'| <= |A|");
  const int terms = uniform_int(rng, 1, 3);
  const std::vector<double> w = random_simplex(terms, rng);
  RMatrix p = RMatrix::Zero(dAp, dA);
  for (int l = 0; l < terms; ++l) {
    const std::vector<int> f = random_injection(dAp, dA, rng);
    for (int jp = 0; jp < dAp; ++jp) p(jp, f[static_cast<std::size_t>(jp)]) += w[static_cast<std::size_t>(l)];
  }
  return classical_channel(StochasticMatrix(std::move(p)));
}

/// Channel sending every |j><j| to a diagonal state but carrying coherence
/// between inputs: a mixture of a random incoherent-Kraus channel (injective
/// supports with random phases) and a random incoherent channel. Needs dA <= dB.
inline Channel random_mio_channel(const DimPair& dims, Rng& rng) {
  const int dA = dims.dA();
  const int dB = dims.dB();
  if (dA > dB) throw DimensionError("random_mio_channel: requires |A| <= |B|");
  const int r = uniform_int(rng, 1, 3);
  std::vector<std::vector<double>> col_weights;
  for (int j = 0; j < dA; ++j) col_weights.push_back(random_simplex(r, rng));
  std::vector<CMatrix> ops;
  for (int n = 0; n < r; ++n) {
    const std::vector<int> f = random_injection(dA, dB, rng);
    CMatrix k = CMatrix::Zero(dB, dA);
    for (int j = 0; j < dA; ++j) {
      const double w = col_weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)];
      k(f[static_cast<std::size_t>(j)], j) = std::polar(std::sqrt(w), uniform_real(rng, 0.0, 2.0 * std::numbers::pi));
    }
    ops.push_back(std::move(k));
  }
  const CMatrix io = choi_matrix_from_kraus(ops, dims);
  const double q = uniform_real(rng, 0.3, 1.0);
  return Channel::from_choi_unchecked(q * io + (1.0 - q) * random_ic_channel(dims, rng).choi(),
                                      dims);
}

enum class IscFamily { post_composition, pre_composition, preunitary };

inline std::string to_string(IscFamily f) {
  switch (f) {
    case IscFamily::post_composition: return "post_composition";
    case IscFamily::pre_composition: return "pre_composition";
    case IscFamily::preunitary: return "preunitary";
  }
  return "unknown";
}

inline bool family_compatible(IscFamily f, const DimPair& in, const DimPair& out) {
  switch (f) {
    case IscFamily::post_composition: return out.dA() == in.dA();
    case IscFamily::pre_composition: return out.dB() == in.dB() && out.dA() <= in.dA();
    case IscFamily::preunitary: return out.dA() <= in.dA() && out.dB() >= in.dB();
  }
  return false;
}

/// Incoherent superchannel Kraus set from one generator family:
///  - post_composition: phi -> chi o phi for a random incoherent chi: B -> B',
///    Kraus {I_A (x) sqrt(P[a,a']) |a'><a|}.
///  - pre_composition: phi -> phi o chi for a random incoherent chi: A' -> A
///    with column sums <= 1, Kraus {sqrt(W[j',j]) |j'><j| (x) I_B}.
///  - preunitary: a single U (x) V with U a phased partial permutation
///    (coisometry) and V a phased injection (isometry).
inline SuperKrausSet random_isc(IscFamily family, const DimPair& in, const DimPair& out,
                                Rng& rng) {
  if (!family_compatible(family, in, out)) {
    throw DimensionError("random_isc: family " + to_string(family) +
                         " cannot map " + in.str() + " channels to " + out.str());
  }
  SuperKrausSet k{in, out, {}};
  switch (family) {
    case IscFamily::post_composition: {
      const StochasticMatrix p = random_stochastic(in.dB(), out.dB(), rng);
      const CMatrix id = CMatrix::Identity(in.dA(), in.dA());
      for (int a = 0; a < in.dB(); ++a)
        for (int ap = 0; ap < out.dB(); ++ap) {
          if (p(a, ap) <= 0.0) continue;
          CMatrix q = CMatrix::Zero(out.dB(), in.dB());
          q(ap, a) = std::sqrt(p(a, ap));
          k.ops.push_back(kron(id, q));
        }
      break;
    }
    case IscFamily::pre_composition: {
      const Channel chi = random_subnormalized_ic(out.dA(), in.dA(), rng);
      const CMatrix id = CMatrix::Identity(in.dB(), in.dB());
      for (int jp = 0; jp < out.dA(); ++jp)
        for (int j = 0; j < in.dA(); ++j) {
          const double w = chi(jp, jp, j, j).real();
          if (w <= 0.0) continue;
          CMatrix pt = CMatrix::Zero(out.dA(), in.dA());
          pt(jp, j) = std::sqrt(w);
          k.ops.push_back(kron(pt, id));
        }
      break;
    }
    case IscFamily::preunitary: {
      const double two_pi = 2.0 * std::numbers::pi;
      const std::vector<int> g = random_injection(out.dA(), in.dA(), rng);
      CMatrix u = CMatrix::Zero(out.dA(), in.dA());
      for (int jp = 0; jp < out.dA(); ++jp)
        u(jp, g[static_cast<std::size_t>(jp)]) = std::polar(1.0, uniform_real(rng, 0.0, two_pi));
      const std::vector<int> h = random_injection(in.dB(), out.dB(), rng);
      CMatrix v = CMatrix::Zero(out.dB(), in.dB());
      for (int a = 0; a < in.dB(); ++a)
        v(h[static_cast<std::size_t>(a)], a) = std::polar(1.0, uniform_real(rng, 0.0, two_pi));
      k.ops.push_back(kron(u, v));
      break;
    }
  }
  return k;
}

/// Uniform choice among the families compatible with (in, out).
inline SuperKrausSet random_isc(const DimPair& in, const DimPair& out, Rng& rng) {
  std::vector<IscFamily> ok;
  for (IscFamily f : {IscFamily::post_composition, IscFamily::pre_composition,
                      IscFamily::preunitary})
    if (family_compatible(f, in, out)) ok.push_back(f);
  if (ok.empty()) {
    throw DimensionError("random_isc: no generator family maps " + in.str() + " channels to " +
                         out.str());
  }
  return random_isc(ok[static_cast<std::size_t>(uniform_int(rng, 0, int(ok.size()) - 1))], in,
                    out, rng);
}

/// Which output input-dimensions |A'| the sampler may pick for families that
/// allow shrinking the input.
enum class InputShrink {
  allowed,    // |A'| uniform in [1, |A|]
  forbidden,  // |A'| = |A|
};

struct IscSample {
  IscFamily family;
  SuperKrausSet kraus;
};

/// Draws a family uniformly, then output dims compatible with it (|B'| <= max_out_b
/// where the family lets |B'| vary), then the Kraus set.
inline IscSample random_isc_any(const DimPair& in, Rng& rng, InputShrink shrink = InputShrink::allowed,
                                int max_out_b = 4) {
  const auto family = static_cast<IscFamily>(uniform_int(rng, 0, 2));
  const int shrunk_a =
      shrink == InputShrink::allowed ? uniform_int(rng, 1, in.dA()) : in.dA();
  DimPair out;
  switch (family) {
    case IscFamily::post_composition:
      out = DimPair(in.dA(), uniform_int(rng, 1, std::max(max_out_b, in.dB())));
      break;
    case IscFamily::pre_composition:
      out = DimPair(shrunk_a, in.dB());
      break;
    case IscFamily::preunitary:
      out = DimPair(shrunk_a, uniform_int(rng, in.dB(), std::max(max_out_b, in.dB())));
      break;
  }
  return {family, random_isc(family, in, out, rng)};
}

}  // namespace choicoh
