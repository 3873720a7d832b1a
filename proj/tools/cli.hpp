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

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "choicoh/choicoh.hpp"

namespace choicoh::cli {

enum ExitCode : int { kOk = 0, kVerdictFalse = 1, kUsage = 2 };

struct Options {
  double tol = kDefaultTol;
  bool json = false;
  std::uint64_t seed = EnsembleConfig{}.seed;
  bool kraus = false;
};

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

inline std::vector<DimPair> parse_dims_list(const std::string& list) {
  std::vector<DimPair> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw InvalidInputError("bad dims '" + item + "' (expected AxB)");
    try {
      std::size_t used_a = 0;
      std::size_t used_b = 0;
      const std::string a = item.substr(0, x);
      const std::string b = item.substr(x + 1);
      const int da = std::stoi(a, &used_a);
      const int db = std::stoi(b, &used_b);
      if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(item);
      out.emplace_back(da, db);
    } catch (const std::logic_error&) {
      throw InvalidInputError("bad dims '" + item + "' (expected AxB)");
    }
  }
  if (out.empty()) throw InvalidInputError("empty dims list");
  return out;
}

inline void print_matrix(std::ostream& out, const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? "  " : "") << fmt(m(i, j).real());
      if (m(i, j).imag() != 0.0) out << (m(i, j).imag() < 0 ? "-" : "+") << fmt(std::abs(m(i, j).imag())) << "i";
    }
    out << '\n';
  }
}

inline void emit_file(const ChannelFile& f, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << to_json(f).dump(2) << '\n';
  } else {
    write_channel_file(path, f);
  }
}

inline int cmd_validate(const Options& o, const std::string& path, std::ostream& out) {
  const ChannelFile f = read_channel_file(path, o.kraus);
  json report;
  bool verdict = false;
  switch (f.kind) {
    case FileKind::channel: {
      const ValidationReport r = validate_channel(f.matrix, f.channel_dims(), o.tol);
      report = to_json(r);
      verdict = r.verdict;
      break;
    }
    case FileKind::superchannel: {
      const SuperValidationReport r = validate_superchannel(f.matrix, f.in_dims(), f.out_dims(), o.tol);
      report = to_json(r);
      verdict = r.verdict;
      break;
    }
    case FileKind::state:
      verdict = is_density_matrix(f.matrix, o.tol);
      report = {{"verdict", verdict}};
      break;
  }
  report["kind"] = to_string(f.kind);
  out << report.dump(2) << '\n';
  return verdict ? kOk : kVerdictFalse;
}

/// Loads a physically valid channel; returns false (after printing the
/// reason) when the file holds an invalid one.
inline bool load_channel(const Options& o, const std::string& path, std::optional<Channel>& c,
                         std::ostream& err) {
  const ChannelFile f = read_channel_file(path, o.kraus);
  if (f.kind != FileKind::channel) throw InvalidInputError("'" + path + "' is not a channel file");
  if (!validate_channel(f.matrix, f.channel_dims(), o.tol).verdict) {
    err << "error: '" << path << "' is not a valid channel\n";
    return false;
  }
  c = Channel::from_choi_unchecked(f.matrix, f.channel_dims());
  return true;
}

inline int cmd_coherence(const Options& o, const std::string& path, const std::string& measure,
                         std::ostream& out, std::ostream& err) {
  const Measure m = parse_measure(measure);
  const ChannelFile f = read_channel_file(path, o.kraus);
  CoherenceValue v;
  if (f.kind == FileKind::state) {
    if (!is_density_matrix(f.matrix, o.tol)) {
      err << "error: '" << path << "' is not a valid state\n";
      return kVerdictFalse;
    }
    v = measure_state(f.matrix, m, o.tol);
  } else {
    std::optional<Channel> c;
    if (!load_channel(o, path, c, err)) return kVerdictFalse;
    v = measure_channel(*c, m, o.tol);
  }
  if (o.json) {
    out << to_json(v).dump(2) << '\n';
  } else {
    out << fmt(v.value) << '\n';
  }
  return kOk;
}

inline int cmd_classify(const Options& o, const std::string& path, std::ostream& out,
                        std::ostream& err) {
  std::optional<Channel> c;
  if (!load_channel(o, path, c, err)) return kVerdictFalse;
  const bool ic = is_incoherent_channel(*c, o.tol);
  const bool mio = is_mio(*c, o.tol);
  std::optional<ConvexDecomposition> d;
  if (ic) d = ic_decompose(*c, o.tol);
  if (o.json) {
    json j = {{"incoherent", ic}, {"mio_condition", mio}};
    if (d) j["decomposition"] = to_json(*d);
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "incoherent: " << (ic ? "true" : "false") << '\n';
  out << "mio_condition: " << (mio ? "true" : "false") << '\n';
  if (d) {
    out << "decomposition: " << d->terms.size() << " term(s)\n";
    for (std::size_t l = 0; l < d->terms.size(); ++l) {
      out << "  " << fmt(d->weights[l]) << "  f = [";
      const auto& t = d->terms[l].targets();
      for (std::size_t j = 0; j < t.size(); ++j) out << (j ? ", " : "") << t[j];
      out << "]\n";
    }
  }
  return kOk;
}

inline int cmd_maxcoh(const Options& o, int dA, int dB, const std::string& path,
                      std::ostream& out, std::ostream& err) {
  if (dA < 1 || dB < 1) throw DimensionError("maxcoh: dimensions must be >= 1");
  if (dA > dB) {
    err << "error: maxcoh requires |A| ≤ |B| (got " << dA << " > " << dB << ")\n";
    return kUsage;
  }
  emit_file(channel_file(max_coherent_channel(DimPair(dA, dB), std::nullopt, o.tol)), path, out);
  return kOk;
}

inline int cmd_superapply(const Options& o, const std::string& super_path,
                          const std::string& channel_path, bool selective,
                          const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::ifstream probe(super_path);
  if (!probe) throw InvalidInputError("cannot open '" + super_path + "'");
  std::stringstream ss;
  ss << probe.rdbuf();
  ChannelFile sf = channel_file_from_json(parse_json_text(ss.str()));
  if (sf.kind != FileKind::superchannel)
    throw InvalidInputError("'" + super_path + "' is not a superchannel file");
  if (!sf.kraus.empty() && !o.kraus)
    throw InvalidInputError("'" + super_path + "' holds Kraus operators; pass --kraus");
  const std::vector<CMatrix> given_kraus = sf.kraus;
  kraus_to_choi_in_place(sf);

  std::optional<Channel> phi;
  if (!load_channel(o, channel_path, phi, err)) return kVerdictFalse;
  if (!(phi->dims() == sf.in_dims()))
    throw DimensionError("superchannel expects " + sf.in_dims().str() + " channels, got " +
                         phi->dims().str());
  const Superchannel s(sf.matrix, sf.in_dims(), sf.out_dims());
  if (!validate_superchannel(s, o.tol).verdict) {
    err << "error: '" << super_path << "' is not a valid superchannel\n";
    return kVerdictFalse;
  }

  if (!selective) {
    emit_file(channel_file(apply_superchannel(s, *phi)), out_path, out);
    return kOk;
  }
  const SuperKrausSet k = given_kraus.empty()
                              ? superkraus_from_choi(s, o.tol)
                              : SuperKrausSet{sf.in_dims(), sf.out_dims(), given_kraus};
  json outcomes = json::array();
  for (const SelectiveOutcome& r : selective_apply(k, *phi)) {
    json e = {{"probability", r.probability}};
    e["choi"] = r.choi ? matrix_to_json(*r.choi) : json(nullptr);
    outcomes.push_back(std::move(e));
  }
  if (o.json || !out_path.empty()) {
    const json doc = {{"dims", {s.out_dims().dA(), s.out_dims().dB()}}, {"outcomes", outcomes}};
    if (out_path.empty()) {
      out << doc.dump(2) << '\n';
    } else {
      std::ofstream f(out_path);
      if (!f) throw InvalidInputError("cannot write '" + out_path + "'");
      f << doc.dump(2) << '\n';
    }
    return kOk;
  }
  for (std::size_t m = 0; m < outcomes.size(); ++m)
    out << "outcome " << m << ": p = " << fmt(outcomes[m]["probability"].get<double>()) << '\n';
  return kOk;
}

inline void print_table(std::ostream& out, const std::vector<PropertyReport>& reports) {
  out << std::left << std::setw(34) << "property" << std::setw(8) << "trials" << std::setw(10)
      << "failures" << std::setw(10) << "gen_fail" << std::setw(26) << "worst_residual"
      << "verdict\n";
  for (const PropertyReport& r : reports) {
    out << std::left << std::setw(34) << r.name << std::setw(8) << r.trials << std::setw(10)
        << r.failures << std::setw(10) << r.generator_failures << std::setw(26)
        << fmt(r.worst_residual) << (r.pass ? "PASS" : "FAIL") << '\n';
  }
}

inline int cmd_propcheck(const Options& o, int trials, const std::string& dims,
                         const std::vector<std::string>& properties, bool balanced,
                         std::ostream& out) {
  if (trials < 1) throw InvalidInputError("--trials must be >= 1");
  EnsembleConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = trials;
  cfg.tol = o.tol;
  if (!dims.empty()) cfg.dims = parse_dims_list(dims);
  if (balanced) cfg.shrink = InputShrink::forbidden;
  std::vector<Property> selection;
  for (const std::string& p : properties) selection.push_back(parse_property(p));
  if (selection.empty()) selection = all_properties();
  const std::vector<PropertyReport> reports = run_suite(cfg, selection);
  bool pass = true;
  for (const PropertyReport& r : reports) pass = pass && r.pass;
  if (o.json) {
    json arr = json::array();
    for (const PropertyReport& r : reports) arr.push_back(to_json(r));
    out << json{{"seed", cfg.seed}, {"trials", cfg.trials}, {"pass", pass}, {"properties", arr}}.dump(2)
        << '\n';
  } else {
    print_table(out, reports);
  }
  return pass ? kOk : kVerdictFalse;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherence of quantum channels via Choi matrices"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tol", o.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--json", o.json, "Emit JSON");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_flag("--kraus", o.kraus, "Accept Kraus-operator input files");

  std::string path;
  std::string path2;
  std::string out_path;
  std::string measure = "l1";
  int dA = 0;
  int dB = 0;
  bool selective = false;
  int trials = EnsembleConfig{}.trials;
  std::string dims;
  std::vector<std::string> props;
  bool balanced = false;

  auto* validate = app.add_subcommand("validate", "Validate a channel, superchannel or state file");
  validate->add_option("path", path)->required();
  auto* coherence = app.add_subcommand("coherence", "Coherence of a channel or state");
  coherence->add_option("path", path)->required();
  coherence->add_option("--measure", measure, "l1 or rel_ent");
  auto* classify = app.add_subcommand("classify", "Incoherence test and decomposition");
  classify->add_option("path", path)->required();
  auto* maxcoh = app.add_subcommand("maxcoh", "Write the Fourier maximally coherent channel");
  maxcoh->add_option("dA", dA)->required();
  maxcoh->add_option("dB", dB)->required();
  maxcoh->add_option("--out", out_path, "Output file (stdout if omitted)");
  auto* superapply = app.add_subcommand("superapply", "Apply a superchannel to a channel");
  superapply->add_option("super", path)->required();
  superapply->add_option("channel", path2)->required();
  superapply->add_flag("--selective", selective, "Report Kraus-resolved outcomes");
  superapply->add_option("--out", out_path, "Output file (stdout if omitted)");
  auto* propcheck = app.add_subcommand("propcheck", "Run the randomized property suite");
  propcheck->add_option("--trials", trials, "Trials per property");
  propcheck->add_option("--dims", dims, "Comma-separated AxB list");
  propcheck->add_option("--property", props, "Restrict to named properties");
  propcheck->add_flag("--balanced", balanced, "Superchannels keep the input system size");
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o_out;
    std::ostringstream o_err;
    const int code = app.exit(e, o_out, o_err);
    out << o_out.str();
    err << o_err.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(o, path, out);
    if (*coherence) return cmd_coherence(o, path, measure, out, err);
    if (*classify) return cmd_classify(o, path, out, err);
    if (*maxcoh) return cmd_maxcoh(o, dA, dB, out_path, out, err);
    if (*superapply) return cmd_superapply(o, path, path2, selective, out_path, out, err);
    if (*propcheck) return cmd_propcheck(o, trials, dims, props, balanced, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace choicoh::cli
