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
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "choicoh/channel.hpp"
#include "choicoh/coherence.hpp"
#include "choicoh/harness.hpp"
#include "choicoh/incoherent.hpp"
#include "choicoh/superchannel.hpp"

namespace choicoh {

using json = nlohmann::json;

enum class FileKind { channel, superchannel, state };

inline std::string to_string(FileKind k) {
  switch (k) {
    case FileKind::channel: return "channel";
    case FileKind::superchannel: return "superchannel";
    case FileKind::state: return "state";
  }
  return "unknown";
}

/// On-disk object: {kind, dims, matrix} where matrix rows hold [re, im]
/// pairs. dims is [dA, dB] for channels, [dA, dB, dA', dB'] for
/// superchannels and [d] for states. A file may carry "kraus" (a list of such
/// matrices) instead of "matrix"; read_channel_file converts it on request.
struct ChannelFile {
  FileKind kind = FileKind::channel;
  std::vector<int> dims;
  CMatrix matrix;
  std::vector<CMatrix> kraus;

  DimPair channel_dims() const { return DimPair(dims.at(0), dims.at(1)); }
  DimPair in_dims() const { return DimPair(dims.at(0), dims.at(1)); }
  DimPair out_dims() const { return DimPair(dims.at(2), dims.at(3)); }
};

inline json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidInputError("matrix must be a non-empty array of rows");
  const std::size_t n_rows = rows.size();
  if (!rows[0].is_array() || rows[0].empty()) throw InvalidInputError("matrix rows must be non-empty arrays");
  const std::size_t n_cols = rows[0].size();
  CMatrix m(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
  for (std::size_t i = 0; i < n_rows; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n_cols) throw InvalidInputError("ragged matrix rows");
    for (std::size_t j = 0; j < n_cols; ++j) {
      const json& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw InvalidInputError("matrix entries must be [re, im] number pairs");
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw InvalidInputError("non-finite matrix entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(re, im);
    }
  }
  return m;
}

inline FileKind parse_kind(const std::string& s) {
  if (s == "channel") return FileKind::channel;
  if (s == "superchannel") return FileKind::superchannel;
  if (s == "state") return FileKind::state;
  throw InvalidInputError("unknown kind '" + s + "'");
}

/// Parses and shape-checks; no physical validation. Throws InvalidInputError
/// on malformed content and DimensionError on inconsistent shapes.
inline ChannelFile channel_file_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInputError("top-level JSON value must be an object");
  ChannelFile f;
  if (!j.contains("kind") || !j["kind"].is_string()) throw InvalidInputError("missing string field 'kind'");
  f.kind = parse_kind(j["kind"].get<std::string>());
  if (!j.contains("dims") || !j["dims"].is_array()) throw InvalidInputError("missing array field 'dims'");
  for (const json& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1 || d.get<long long>() > 1024)
      throw InvalidInputError("dims must be positive integers");
    f.dims.push_back(d.get<int>());
  }
  const std::size_t want = f.kind == FileKind::state ? 1 : f.kind == FileKind::channel ? 2 : 4;
  if (f.dims.size() != want)
    throw DimensionError(to_string(f.kind) + " needs " + std::to_string(want) + " dims");

  int side = f.dims[0];
  if (f.kind == FileKind::channel) side = f.dims[0] * f.dims[1];
  if (f.kind == FileKind::superchannel) side = f.dims[0] * f.dims[1] * f.dims[2] * f.dims[3];

  const bool has_matrix = j.contains("matrix");
  const bool has_kraus = j.contains("kraus");
  if (has_matrix == has_kraus) throw InvalidInputError("exactly one of 'matrix' or 'kraus' is required");
  if (has_matrix) {
    f.matrix = matrix_from_json(j["matrix"]);
    require_side(f.matrix, side, "channel file");
  } else {
    if (f.kind == FileKind::state) throw InvalidInputError("states cannot be given as Kraus operators");
    if (!j["kraus"].is_array() || j["kraus"].empty()) throw InvalidInputError("'kraus' must be a non-empty array");
    Eigen::Index rows = f.dims[1];
    Eigen::Index cols = f.dims[0];
    if (f.kind == FileKind::superchannel) {
      rows = f.dims[2] * f.dims[3];
      cols = f.dims[0] * f.dims[1];
    }
    for (const json& k : j["kraus"]) {
      CMatrix op = matrix_from_json(k);
      if (op.rows() != rows || op.cols() != cols)
        throw DimensionError("Kraus operator has shape " + std::to_string(op.rows()) + "x" +
                             std::to_string(op.cols()) + ", expected " + std::to_string(rows) +
                             "x" + std::to_string(cols));
      f.kraus.push_back(std::move(op));
    }
  }
  return f;
}

/// Replaces a Kraus list by its Choi matrix.
inline void kraus_to_choi_in_place(ChannelFile& f) {
  if (f.kraus.empty()) return;
  if (f.kind == FileKind::channel) {
    f.matrix = choi_matrix_from_kraus(f.kraus, f.channel_dims());
  } else {
    f.matrix = choi_from_superkraus(SuperKrausSet{f.in_dims(), f.out_dims(), f.kraus}).choi();
  }
}

inline json to_json(const ChannelFile& f) {
  json j;
  j["kind"] = to_string(f.kind);
  j["dims"] = f.dims;
  if (f.kraus.empty()) {
    j["matrix"] = matrix_to_json(f.matrix);
  } else {
    json ks = json::array();
    for (const CMatrix& k : f.kraus) ks.push_back(matrix_to_json(k));
    j["kraus"] = std::move(ks);
  }
  return j;
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("malformed JSON: ") + e.what());
  }
}

/// Reads a file; with kraus_mode a Kraus list is converted to its Choi matrix.
inline ChannelFile read_channel_file(const std::string& path, bool kraus_mode = false) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ChannelFile f = channel_file_from_json(parse_json_text(ss.str()));
  if (!f.kraus.empty()) {
    if (!kraus_mode) throw InvalidInputError("'" + path + "' holds Kraus operators; pass --kraus");
    kraus_to_choi_in_place(f);
  }
  return f;
}

inline void write_channel_file(const std::string& path, const ChannelFile& f) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path + "'");
  out << to_json(f).dump(2) << '\n';
}

inline ChannelFile channel_file(const Channel& c) {
  return {FileKind::channel, {c.dA(), c.dB()}, c.choi(), {}};
}

inline ChannelFile channel_file(const Superchannel& s) {
  return {FileKind::superchannel,
          {s.in_dims().dA(), s.in_dims().dB(), s.out_dims().dA(), s.out_dims().dB()},
          s.choi(),
          {}};
}

inline ChannelFile state_file(const CMatrix& rho) {
  return {FileKind::state, {static_cast<int>(rho.rows())}, rho, {}};
}

inline json to_json(const ValidationReport& r) {
  return {{"is_hermitian", r.is_hermitian},
          {"min_eigenvalue", r.min_eigenvalue},
          {"trace_condition_residual", r.trace_condition_residual},
          {"verdict", r.verdict}};
}

inline json to_json(const SuperValidationReport& r) {
  return {{"psd", r.psd},
          {"min_eigenvalue", r.min_eigenvalue},
          {"block_trace_residual", r.block_trace_residual},
          {"normalization_residual", r.normalization_residual},
          {"trace_residual", r.trace_residual},
          {"verdict", r.verdict}};
}

inline json to_json(const CoherenceValue& v) {
  return {{"measure", to_string(v.measure)}, {"value", v.value}, {"normalization", v.normalization}};
}

inline json to_json(const ConvexDecomposition& d) {
  json assignments = json::array();
  for (const DeterministicAssignment& f : d.terms) assignments.push_back(f.targets());
  return {{"weights", d.weights}, {"assignments", std::move(assignments)}};
}

inline json to_json(const PropertyReport& r) {
  json j = {{"name", r.name},
            {"trials", r.trials},
            {"failures", r.failures},
            {"generator_failures", r.generator_failures},
            {"worst_residual", r.worst_residual},
            {"offending_seeds", r.offending_seeds},
            {"pass", r.pass}};
  if (!r.records.empty()) j["records"] = r.records;
  return j;
}

}  // namespace choicoh
