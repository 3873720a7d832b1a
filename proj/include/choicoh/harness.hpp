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
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "choicoh/channel.hpp"
#include "choicoh/coherence.hpp"
#include "choicoh/incoherent.hpp"
#include "choicoh/random.hpp"
#include "choicoh/superchannel.hpp"

namespace choicoh {

/// All pairs with dA, dB in {1,2,3}, plus (2,4).
inline std::vector<DimPair> default_dims() {
  std::vector<DimPair> d;
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) d.emplace_back(a, b);
  d.emplace_back(2, 4);
  return d;
}

struct EnsembleConfig {
  std::uint64_t seed = 20260101;
  int trials = 500;
  std::vector<DimPair> dims = default_dims();
  double tol = kDefaultTol;
  /// Whether superchannel samplers may shrink the input system (|A'| < |A|).
  InputShrink shrink = InputShrink::allowed;
  /// Random channels each sampled superchannel is applied to.
  int images_per_superchannel = 100;
  /// Sanity mode: the resource-destroying map used by the faithfulness
  /// suites skips the dephasing step.
  bool inject_skip_dephasing = false;
};

struct PropertyReport {
  std::string name;
  int trials = 0;
  int failures = 0;
  /// Largest signed violation seen (negative means every trial had slack).
  double worst_residual = -std::numeric_limits<double>::infinity();
  /// Per-trial stream seeds of failing trials (first 16).
  std::vector<std::uint64_t> offending_seeds;
  /// Samples rejected by their own validator before use.
  int generator_failures = 0;
  /// Free-form numeric records some properties keep (e.g. measure pairs).
  std::vector<std::vector<double>> records;
  bool pass = false;
};

enum class Property {
  superchannel_soundness,
  incoherent_fixed_point,
  stochastic_decomposition,
  preunitary_factorization,
  maximal_coherence,
  faithfulness_l1,
  faithfulness_rel_ent,
  isc_monotonicity_l1,
  isc_monotonicity_rel_ent,
  selective_monotonicity_l1,
  selective_monotonicity_rel_ent,
  convexity_l1,
  convexity_rel_ent,
  monotonicity_implication,
  post_composition_l1,
  post_composition_rel_ent,
  pre_composition_l1,
  pre_composition_rel_ent,
  mixture_additivity,
  state_degeneration,
  scaled_state_not_choi,
  isc_within_misc,
};

inline const std::vector<Property>& all_properties() {
  static const std::vector<Property> all = {
      Property::superchannel_soundness,   Property::incoherent_fixed_point,
      Property::stochastic_decomposition, Property::preunitary_factorization,
      Property::maximal_coherence,        Property::faithfulness_l1,
      Property::faithfulness_rel_ent,     Property::isc_monotonicity_l1,
      Property::isc_monotonicity_rel_ent, Property::selective_monotonicity_l1,
      Property::selective_monotonicity_rel_ent, Property::convexity_l1,
      Property::convexity_rel_ent,        Property::monotonicity_implication,
      Property::post_composition_l1,      Property::post_composition_rel_ent,
      Property::pre_composition_l1,       Property::pre_composition_rel_ent,
      Property::mixture_additivity,       Property::state_degeneration,
      Property::scaled_state_not_choi,    Property::isc_within_misc,
  };
  return all;
}

inline std::string to_string(Property p) {
  switch (p) {
    case Property::superchannel_soundness: return "superchannel_soundness";
    case Property::incoherent_fixed_point: return "incoherent_fixed_point";
    case Property::stochastic_decomposition: return "stochastic_decomposition";
    case Property::preunitary_factorization: return "preunitary_factorization";
    case Property::maximal_coherence: return "maximal_coherence";
    case Property::faithfulness_l1: return "faithfulness_l1";
    case Property::faithfulness_rel_ent: return "faithfulness_rel_ent";
    case Property::isc_monotonicity_l1: return "isc_monotonicity_l1";
    case Property::isc_monotonicity_rel_ent: return "isc_monotonicity_rel_ent";
    case Property::selective_monotonicity_l1: return "selective_monotonicity_l1";
    case Property::selective_monotonicity_rel_ent: return "selective_monotonicity_rel_ent";
    case Property::convexity_l1: return "convexity_l1";
    case Property::convexity_rel_ent: return "convexity_rel_ent";
    case Property::monotonicity_implication: return "monotonicity_implication";
    case Property::post_composition_l1: return "post_composition_l1";
    case Property::post_composition_rel_ent: return "post_composition_rel_ent";
    case Property::pre_composition_l1: return "pre_composition_l1";
    case Property::pre_composition_rel_ent: return "pre_composition_rel_ent";
    case Property::mixture_additivity: return "mixture_additivity";
    case Property::state_degeneration: return "state_degeneration";
    case Property::scaled_state_not_choi: return "scaled_state_not_choi";
    case Property::isc_within_misc: return "isc_within_misc";
  }
  return "unknown";
}

inline Property parse_property(const std::string& s) {
  for (Property p : all_properties())
    if (to_string(p) == s) return p;
  throw InvalidInputError("unknown property '" + s + "'");
}

namespace detail {

inline std::uint64_t stream_id(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

/// Accumulates per-trial outcomes for one property.
class Recorder {
 public:
  explicit Recorder(std::string name) { report_.name = std::move(name); }

  void trial() { ++report_.trials; }

  /// Records a signed residual; the trial fails when residual > 0.
  void residual(double r, std::uint64_t seed) {
    report_.worst_residual = std::max(report_.worst_residual, r);
    if (r > 0.0 || std::isnan(r)) fail(seed);
  }

  void check(bool ok, std::uint64_t seed) { residual(ok ? -1.0 : 1.0, seed); }

  void generator_failure() { ++report_.generator_failures; }

  void record(std::vector<double> values) { report_.records.push_back(std::move(values)); }

  PropertyReport finish() {
    if (report_.trials == 0) report_.worst_residual = 0.0;
    report_.pass = report_.failures == 0 && report_.generator_failures == 0;
    return std::move(report_);
  }

 private:
  void fail(std::uint64_t seed) {
    if (!failed_this_seed_ || last_seed_ != seed) {
      ++report_.failures;
      if (report_.offending_seeds.size() < 16) report_.offending_seeds.push_back(seed);
    }
    failed_this_seed_ = true;
    last_seed_ = seed;
  }

  PropertyReport report_;
  bool failed_this_seed_ = false;
  std::uint64_t last_seed_ = 0;
};

/// Runs fn(trial_index, rng, seed) for each trial with its own stream.
template <typename Fn>
void for_each_trial(const EnsembleConfig& cfg, const std::string& name, int trials, Fn&& fn) {
  const std::uint64_t stream = stream_id(name);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = trial_seed(cfg.seed, stream, static_cast<std::uint64_t>(t));
    Rng rng(s);
    fn(t, rng, s);
  }
}

inline const DimPair& dims_for(const EnsembleConfig& cfg, int t) {
  return cfg.dims[static_cast<std::size_t>(t) % cfg.dims.size()];
}

inline Channel harness_upsilon(const Channel& phi, const EnsembleConfig& cfg) {
  return cfg.inject_skip_dephasing ? phi : upsilon(phi);
}

inline double measure_of(const Channel& phi, Measure m, double tol) {
  return measure_channel(phi, m, tol).value;
}

/// Worst signed violation of a superchannel's validity conditions.
inline double super_validity_residual(const SuperValidationReport& r, double tol) {
  return std::max({-r.min_eigenvalue - tol, r.block_trace_residual - tol,
                   r.normalization_residual - tol, r.trace_residual - tol});
}

inline double channel_validity_residual(const ValidationReport& r, double tol) {
  return std::max({-r.min_eigenvalue - tol, r.trace_condition_residual - tol,
                   r.is_hermitian ? -tol : 1.0});
}

// ---------------------------------------------------------------------------

inline PropertyReport superchannel_soundness(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::superchannel_soundness);
  const double tol = std::max(cfg.tol, 1e-8);
  Recorder rec(name);

  // One pool of random channels per input dimension pair.
  std::vector<std::vector<Channel>> pools;
  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    Rng rng(trial_seed(cfg.seed, stream_id(name + "/pool"), i));
    std::vector<Channel> pool;
    for (int n = 0; n < cfg.images_per_superchannel; ++n)
      pool.push_back(random_channel(cfg.dims[i], rng));
    pools.push_back(std::move(pool));
  }

  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const DimPair& in = dims_for(cfg, t);
    rec.trial();
    std::optional<Superchannel> s;
    switch (t % 5) {
      case 0:
      case 1:
      case 2:
        s = choi_from_superkraus(random_isc_any(in, rng, cfg.shrink).kraus);
        break;
      case 3: {
        const int dAp = uniform_int(rng, 1, 3);
        const int dBp = uniform_int(rng, 1, 4);
        s = sandwich_superchannel(random_channel(DimPair(dAp, in.dA()), rng),
                                  random_channel(DimPair(in.dB(), dBp), rng));
        break;
      }
      default:
        s = upsilon_superchannel(in);
        break;
    }
    const SuperValidationReport r = validate_superchannel(*s, tol);
    rec.residual(super_validity_residual(r, tol), seed);
    for (const Channel& phi : pools[static_cast<std::size_t>(t) % pools.size()]) {
      const Channel image = apply_superchannel(*s, phi);
      rec.residual(channel_validity_residual(validate_channel(image.choi(), image.dims(), tol), tol),
                   seed);
    }
  });
  return rec.finish();
}

inline PropertyReport incoherent_fixed_point(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::incoherent_fixed_point);
  Recorder rec(name);
  static constexpr std::array<double, 4> kEps = {1e-6, 1e-8, 1e-10, 1e-12};
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const DimPair& dims = dims_for(cfg, t);
    rec.trial();
    CMatrix j;
    switch (t % 3) {
      case 0: j = random_channel(dims, rng).choi(); break;
      case 1: j = random_ic_channel(dims, rng).choi(); break;
      default: {
        const double eps = kEps[static_cast<std::size_t>(uniform_int(rng, 0, 3))];
        j = (1.0 - eps) * random_ic_channel(dims, rng).choi() +
            eps * random_channel(dims, rng).choi();
      }
    }
    const Channel phi = Channel::from_choi_unchecked(j, dims);
    // Delta^B o phi o Delta^A by composition, independent of upsilon().
    const Channel fixed =
        compose(dephasing_channel(dims.dB()), compose(phi, dephasing_channel(dims.dA())));
    const bool by_definition = max_abs(phi.choi() - fixed.choi()) <= cfg.tol;
    rec.check(by_definition == is_incoherent_channel(phi, cfg.tol), seed);
  });
  return rec.finish();
}

inline PropertyReport stochastic_decomposition(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::stochastic_decomposition);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const int m = uniform_int(rng, 1, 5);
    const int n = uniform_int(rng, 1, 5);
    RMatrix p(m, n);
    if (t % 2 == 0) {
      p = random_stochastic(m, n, rng).matrix();
    } else {
      // Quarter-grid rows with sparsity: exercises ties and exact zeros.
      for (int j = 0; j < m; ++j) {
        std::vector<int> counts(static_cast<std::size_t>(n), 0);
        for (int q = 0; q < 4; ++q) ++counts[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))];
        for (int a = 0; a < n; ++a) p(j, a) = 0.25 * counts[static_cast<std::size_t>(a)];
      }
    }
    rec.trial();
    const ConvexDecomposition d = decompose_row_stochastic(StochasticMatrix(p));
    const double recon = (d.reconstruct() - p).cwiseAbs().maxCoeff();
    double weight_sum = 0.0;
    double min_weight = std::numeric_limits<double>::infinity();
    for (double w : d.weights) {
      weight_sum += w;
      min_weight = std::min(min_weight, w);
    }
    const double bound = static_cast<double>(d.terms.size()) - (m * (n - 1) + 1);
    rec.residual(std::max({recon - 1e-9, std::abs(weight_sum - 1.0) - 1e-9, -min_weight, bound}),
                 seed);
  });
  return rec.finish();
}

inline PropertyReport preunitary_factorization(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::preunitary_factorization);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const int dA = uniform_int(rng, 1, 3);
    const int dAp = uniform_int(rng, 1, dA);
    const int dB = uniform_int(rng, 1, 3);
    const int dBp = uniform_int(rng, dB, 4);
    const DimPair in(dA, dB);
    const DimPair out(dAp, dBp);
    rec.trial();
    const CMatrix u = random_coisometry(dAp, dA, rng);
    const CMatrix v = random_isometry(dBp, dB, rng);
    const CMatrix uv = kron(u, v);
    try {
      const PreunitaryFactors f = preunitary_factorize(uv, in, out, 1e-9);
      // Align the global phase against the true factor before comparing.
      Eigen::Index r = 0;
      Eigen::Index c = 0;
      u.cwiseAbs().maxCoeff(&r, &c);
      const Complex phase = f.u(r, c) / u(r, c);
      const double err = std::max({max_abs(kron(f.u, f.v) - uv),
                                   max_abs(f.u - phase * u),
                                   max_abs(f.v - std::conj(phase) * v)});
      rec.residual(err - 1e-9, seed);
    } catch (const NotFactorizableError&) {
      rec.residual(1.0, seed);
    }
    (void)t;
  });
  return rec.finish();
}

/// Non-product operators must be rejected: half controlled-unitary (CNOT-like)
/// patterns, half Gaussian matrices.
inline PropertyReport preunitary_rejection(const EnsembleConfig& cfg) {
  const std::string name = "preunitary_rejection";
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const int dA = uniform_int(rng, 2, 3);
    const int dAp = uniform_int(rng, 1, dA);
    const int dB = uniform_int(rng, 2, 3);
    const int dBp = uniform_int(rng, dB, 4);
    const DimPair in(dA, dB);
    const DimPair out(dAp, dBp);
    CMatrix m = CMatrix::Zero(out.total(), in.total());
    if (t % 2 == 0) {
      const std::vector<int> g = random_injection(dAp, dA, rng);
      for (int jp = 0; jp < dAp; ++jp)
        m.block(jp * dBp, g[static_cast<std::size_t>(jp)] * dB, dBp, dB) =
            random_isometry(dBp, dB, rng);
      if (dAp == 1) {
        // A single block is always a product; add a second, different one.
        const int other = (g[0] + 1) % dA;
        m.block(0, other * dB, dBp, dB) = random_isometry(dBp, dB, rng);
      }
    } else {
      m = gaussian_matrix(out.total(), in.total(), rng);
    }
    rec.trial();
    bool rejected = false;
    try {
      preunitary_factorize(m, in, out, 1e-9);
    } catch (const NotFactorizableError&) {
      rejected = true;
    }
    rec.check(rejected, seed);
  });
  return rec.finish();
}

inline PropertyReport maximal_coherence(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::maximal_coherence);
  Recorder rec(name);
  int t = 0;
  for (int dB = 1; dB <= 4; ++dB)
    for (int dA = 1; dA <= dB; ++dA, ++t) {
      const DimPair dims(dA, dB);
      const std::uint64_t seed = trial_seed(cfg.seed, stream_id(name), static_cast<std::uint64_t>(t));
      Rng rng(seed);
      // Fourier phases, then the same with random row and column phase shifts.
      // theta_{j alpha} + r_j + c_alpha keeps the rows orthogonal.
      PhaseMatrix shifted = PhaseMatrix::fourier(dims);
      std::vector<double> r(static_cast<std::size_t>(dA));
      std::vector<double> c(static_cast<std::size_t>(dB));
      for (double& x : r) x = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
      for (double& x : c) x = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
      for (int j = 0; j < dA; ++j)
        for (int a = 0; a < dB; ++a)
          shifted.theta(j, a) += r[static_cast<std::size_t>(j)] + c[static_cast<std::size_t>(a)];
      for (const auto& theta : {std::optional<PhaseMatrix>{}, std::optional<PhaseMatrix>{shifted}}) {
        if (theta && theta->orthogonality_residual() > cfg.tol) {
          rec.generator_failure();
          continue;
        }
        rec.trial();
        const Channel phi = max_coherent_channel(dims, theta, cfg.tol);
        const double l1 = c_l1_channel(phi, cfg.tol).value;
        const double re = c_rel_ent_channel(phi, cfg.tol).value;
        rec.residual(std::max(std::abs(l1 - (dA * dB - 1.0)),
                              std::abs(re - std::log2(double(dA * dB)))) - 1e-9,
                     seed);
      }
    }
  return rec.finish();
}

inline PropertyReport faithfulness(const EnsembleConfig& cfg, Measure m) {
  const std::string name = to_string(m == Measure::l1 ? Property::faithfulness_l1
                                                      : Property::faithfulness_rel_ent);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const DimPair& dims = dims_for(cfg, t);
    rec.trial();
    const Channel free_channel = (t % 2 == 0)
                                     ? random_ic_channel(dims, rng)
                                     : harness_upsilon(random_channel(dims, rng), cfg);
    rec.residual(measure_of(free_channel, m, cfg.tol) - 1e-9, seed);
    // A non-trivial output space always admits coherent channels.
    if (dims.dB() >= 2) {
      const Channel coherent = dims.dA() <= dims.dB() ? random_isometry_channel(dims, rng)
                                                      : random_channel(dims, rng);
      rec.residual(1e-3 - measure_of(coherent, m, cfg.tol), seed);
    }
  });
  return rec.finish();
}

/// One ISC trial shared by the monotonicity suites.
struct IscTrial {
  double before = 0.0;        // C(phi)
  double after = 0.0;         // C(Theta(phi))
  double average = 0.0;       // sum_m p_m C(phi_m)
  double mixed_branches = 0.0;  // C(sum_m p_m J_m / |A'|)
  bool generator_ok = true;
};

inline IscTrial isc_trial(const EnsembleConfig& cfg, const DimPair& in, Measure m, Rng& rng) {
  IscTrial out;
  const IscSample sample = random_isc_any(in, rng, cfg.shrink);
  const Superchannel s = choi_from_superkraus(sample.kraus);
  out.generator_ok = is_incoherent_expression(sample.kraus, cfg.tol) &&
                     validate_superchannel(s, 1e-8).verdict;
  const Channel phi = random_channel(in, rng);
  out.before = measure_of(phi, m, cfg.tol);
  out.after = measure_of(apply_superchannel(s, phi), m, cfg.tol);
  const int dAp = sample.kraus.out_dims.dA();
  CMatrix mixed = CMatrix::Zero(sample.kraus.out_dims.total(), sample.kraus.out_dims.total());
  for (const SelectiveOutcome& o : selective_apply(sample.kraus, phi)) {
    if (!o.choi) continue;
    out.average += o.probability * measure_subnormalized(*o.choi, dAp, m, 1e-8).value;
    mixed += o.probability * *o.choi;
  }
  out.mixed_branches = measure_subnormalized(mixed, dAp, m, 1e-8).value;
  return out;
}

inline PropertyReport isc_monotonicity(const EnsembleConfig& cfg, Measure m, bool selective) {
  const Property p = selective ? (m == Measure::l1 ? Property::selective_monotonicity_l1
                                                   : Property::selective_monotonicity_rel_ent)
                               : (m == Measure::l1 ? Property::isc_monotonicity_l1
                                                   : Property::isc_monotonicity_rel_ent);
  const std::string name = to_string(p);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const IscTrial r = isc_trial(cfg, dims_for(cfg, t), m, rng);
    if (!r.generator_ok) {
      rec.generator_failure();
      return;
    }
    rec.trial();
    rec.residual((selective ? r.average : r.after) - r.before - 1e-9, seed);
  });
  return rec.finish();
}

/// Convexity plus averaged monotonicity imply deterministic monotonicity: no
/// trial may break the latter while satisfying both of the former.
inline PropertyReport monotonicity_implication(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::monotonicity_implication);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const Measure m = (t % 2 == 0) ? Measure::l1 : Measure::rel_ent;
    const IscTrial r = isc_trial(cfg, dims_for(cfg, t), m, rng);
    if (!r.generator_ok) {
      rec.generator_failure();
      return;
    }
    rec.trial();
    const bool deterministic = r.after <= r.before + 1e-9;
    const bool averaged = r.average <= r.before + 1e-9;
    const bool convex = r.mixed_branches <= r.average + 1e-9;
    rec.check(deterministic || !(averaged && convex), seed);
  });
  return rec.finish();
}

inline PropertyReport convexity(const EnsembleConfig& cfg, Measure m) {
  const std::string name =
      to_string(m == Measure::l1 ? Property::convexity_l1 : Property::convexity_rel_ent);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const DimPair& dims = dims_for(cfg, t);
    const Channel a = random_channel(dims, rng);
    const Channel b = (t % 4 == 3) ? random_ic_channel(dims, rng) : random_channel(dims, rng);
    const double ca = measure_of(a, m, cfg.tol);
    const double cb = measure_of(b, m, cfg.tol);
    rec.trial();
    for (int i = 1; i <= 9; ++i) {
      const double p = 0.1 * i;
      const Channel mix = Channel::from_choi_unchecked(p * a.choi() + (1.0 - p) * b.choi(), dims);
      rec.residual(measure_of(mix, m, cfg.tol) - (p * ca + (1.0 - p) * cb) - 1e-9, seed);
    }
  });
  return rec.finish();
}

/// Every fifth trial uses the completely dephasing channel as chi.
inline PropertyReport composition_monotonicity(const EnsembleConfig& cfg, Measure m, bool post) {
  const Property p = post ? (m == Measure::l1 ? Property::post_composition_l1
                                              : Property::post_composition_rel_ent)
                          : (m == Measure::l1 ? Property::pre_composition_l1
                                              : Property::pre_composition_rel_ent);
  const std::string name = to_string(p);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const DimPair& dims = dims_for(cfg, t);
    const Channel phi = random_channel(dims, rng);
    const bool dephasing = t % 5 == 4;
    std::optional<Channel> composed;
    if (post) {
      const Channel chi = dephasing ? dephasing_channel(dims.dB())
                                    : random_ic_channel(DimPair(dims.dB(), uniform_int(rng, 1, 4)), rng);
      composed = compose(chi, phi);
    } else {
      const int dAp = cfg.shrink == InputShrink::allowed ? uniform_int(rng, 1, dims.dA()) : dims.dA();
      const Channel chi =
          dephasing ? dephasing_channel(dims.dA()) : random_subnormalized_ic(dAp, dims.dA(), rng);
      composed = compose(phi, chi);
    }
    rec.trial();
    rec.residual(measure_of(*composed, m, cfg.tol) - measure_of(phi, m, cfg.tol) - 1e-9, seed);
  });
  return rec.finish();
}

/// C_l1(p phi + (1-p) rho^B) = p C_l1(phi) + (1-p) C_l1(rho^B) for channels
/// passing the diagonal-image condition. The first trial is the qubit identity.
inline PropertyReport mixture_additivity(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::mixture_additivity);
  static const std::array<DimPair, 6> kDims = {DimPair(1, 2), DimPair(2, 2), DimPair(2, 3),
                                               DimPair(3, 3), DimPair(2, 4), DimPair(1, 3)};
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const DimPair& dims = kDims[static_cast<std::size_t>(t) % kDims.size()];
    const Channel phi = t == 0 ? identity_channel(2) : random_mio_channel(dims, rng);
    if (!is_mio(phi, cfg.tol)) {
      rec.generator_failure();
      return;
    }
    const CMatrix rho_b = random_state(phi.dB(), rng);
    const double c_phi = c_l1_channel(phi, cfg.tol).value;
    const double c_rho = c_l1_state(rho_b, cfg.tol).value;
    rec.trial();
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double lhs = c_l1_channel(mixture(p, phi, rho_b, cfg.tol), cfg.tol).value;
      rec.residual(std::abs(lhs - (p * c_phi + (1.0 - p) * c_rho)) - 1e-9, seed);
    }
  });
  return rec.finish();
}

/// For |A| = 1 the channel measures are the state measures of J, bit for bit.
/// Records (C_l1, C_rel_ent) pairs.
inline PropertyReport state_degeneration(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::state_degeneration);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const DimPair dims(1, 1 + t % 4);
    const Channel phi = random_channel(dims, rng);
    rec.trial();
    const double l1_channel = c_l1_channel(phi, cfg.tol).value;
    const double l1_state = c_l1_state(phi.choi(), cfg.tol).value;
    const double re_channel = c_rel_ent_channel(phi, cfg.tol).value;
    const double re_state = c_rel_ent_state(phi.choi(), cfg.tol).value;
    rec.check(l1_channel == l1_state && re_channel == re_state, seed);
    if (t < 64) rec.record({l1_channel, re_channel});
  });
  return rec.finish();
}

inline PropertyReport scaled_state_not_choi(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::scaled_state_not_choi);
  Recorder rec(name);
  int t = 0;
  for (const DimPair& dims : cfg.dims) {
    const std::uint64_t seed = trial_seed(cfg.seed, stream_id(name), static_cast<std::uint64_t>(t++));
    const int n = dims.total();
    const CMatrix uniform = CMatrix::Constant(n, n, Complex(1.0 / n, 0.0));
    rec.trial();
    // Rescaling fails to give a Choi matrix exactly when |A| >= 2.
    rec.check(verify_not_choi(uniform, dims, cfg.tol) == (dims.dA() >= 2), seed);
    if (dims.dA() == dims.dB()) {
      rec.trial();
      const CMatrix id_state = identity_channel(dims.dA()).choi() / double(dims.dA());
      rec.check(!verify_not_choi(id_state, dims, cfg.tol), seed);
    }
  }
  return rec.finish();
}

inline PropertyReport isc_within_misc(const EnsembleConfig& cfg) {
  const std::string name = to_string(Property::isc_within_misc);
  Recorder rec(name);
  for_each_trial(cfg, name, cfg.trials, [&](int t, Rng& rng, std::uint64_t seed) {
    const IscSample sample = random_isc_any(dims_for(cfg, t), rng, cfg.shrink);
    if (!is_incoherent_expression(sample.kraus, cfg.tol)) {
      rec.generator_failure();
      return;
    }
    rec.trial();
    rec.check(is_misc(choi_from_superkraus(sample.kraus), cfg.tol), seed);
  });
  return rec.finish();
}

}  // namespace detail

inline PropertyReport run_property(const EnsembleConfig& cfg, Property p) {
  if (cfg.trials < 1) throw InvalidInputError("run_property: trials must be >= 1");
  if (cfg.dims.empty()) throw InvalidInputError("run_property: no dimensions configured");
  using namespace detail;
  switch (p) {
    case Property::superchannel_soundness: return superchannel_soundness(cfg);
    case Property::incoherent_fixed_point: return incoherent_fixed_point(cfg);
    case Property::stochastic_decomposition: return stochastic_decomposition(cfg);
    case Property::preunitary_factorization: {
      // Acceptance of products and rejection of non-products, one report.
      PropertyReport a = detail::preunitary_factorization(cfg);
      const PropertyReport b = preunitary_rejection(cfg);
      a.trials += b.trials;
      a.failures += b.failures;
      a.worst_residual = std::max(a.worst_residual, b.worst_residual);
      for (std::uint64_t s : b.offending_seeds)
        if (a.offending_seeds.size() < 16) a.offending_seeds.push_back(s);
      a.pass = a.pass && b.pass;
      return a;
    }
    case Property::maximal_coherence: return detail::maximal_coherence(cfg);
    case Property::faithfulness_l1: return faithfulness(cfg, Measure::l1);
    case Property::faithfulness_rel_ent: return faithfulness(cfg, Measure::rel_ent);
    case Property::isc_monotonicity_l1: return isc_monotonicity(cfg, Measure::l1, false);
    case Property::isc_monotonicity_rel_ent: return isc_monotonicity(cfg, Measure::rel_ent, false);
    case Property::selective_monotonicity_l1: return isc_monotonicity(cfg, Measure::l1, true);
    case Property::selective_monotonicity_rel_ent:
      return isc_monotonicity(cfg, Measure::rel_ent, true);
    case Property::convexity_l1: return convexity(cfg, Measure::l1);
    case Property::convexity_rel_ent: return convexity(cfg, Measure::rel_ent);
    case Property::monotonicity_implication: return detail::monotonicity_implication(cfg);
    case Property::post_composition_l1: return composition_monotonicity(cfg, Measure::l1, true);
    case Property::post_composition_rel_ent:
      return composition_monotonicity(cfg, Measure::rel_ent, true);
    case Property::pre_composition_l1: return composition_monotonicity(cfg, Measure::l1, false);
    case Property::pre_composition_rel_ent:
      return composition_monotonicity(cfg, Measure::rel_ent, false);
    case Property::mixture_additivity: return detail::mixture_additivity(cfg);
    case Property::state_degeneration: return detail::state_degeneration(cfg);
    case Property::scaled_state_not_choi: return detail::scaled_state_not_choi(cfg);
    case Property::isc_within_misc: return detail::isc_within_misc(cfg);
  }
  throw InvalidInputError("run_property: unknown property");
}

/// Deterministic given cfg.seed: every trial owns a stream derived from
/// (seed, property, trial index).
inline std::vector<PropertyReport> run_suite(const EnsembleConfig& cfg,
                                             const std::vector<Property>& properties = all_properties()) {
  std::vector<PropertyReport> out;
  out.reserve(properties.size());
  for (Property p : properties) out.push_back(run_property(cfg, p));
  return out;
}

}  // namespace choicoh
