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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "choicoh/random.hpp"
#include "choicoh/serialization.hpp"

namespace choicoh {
namespace {

const std::string kFixtures = CHOICOH_FIXTURES;

TEST(SerializationTest, MatrixRoundTripIsExact) {
  Rng rng(61);
  const CMatrix m = gaussian_matrix(3, 4, rng);
  const json j = json::parse(matrix_to_json(m).dump());
  EXPECT_EQ(matrix_from_json(j), m);
}

TEST(SerializationTest, FileRoundTrip) {
  Rng rng(62);
  const Channel c = random_channel(DimPair(2, 3), rng);
  const auto path = std::filesystem::temp_directory_path() / "choicoh_roundtrip.json";
  write_channel_file(path.string(), channel_file(c));
  const ChannelFile f = read_channel_file(path.string());
  EXPECT_EQ(f.kind, FileKind::channel);
  EXPECT_EQ(f.dims, (std::vector<int>{2, 3}));
  EXPECT_EQ(f.matrix, c.choi());
  std::filesystem::remove(path);
}

TEST(SerializationTest, ReadsFixtures) {
  const ChannelFile id = read_channel_file(kFixtures + "/identity_qubit.json");
  EXPECT_EQ(id.matrix, identity_channel(2).choi());
  const ChannelFile ups = read_channel_file(kFixtures + "/upsilon_super_2x2.json");
  EXPECT_EQ(ups.kind, FileKind::superchannel);
  EXPECT_EQ(ups.matrix, upsilon_superchannel(DimPair(2, 2)).choi());
  const ChannelFile plus = read_channel_file(kFixtures + "/plus_state.json");
  EXPECT_EQ(plus.kind, FileKind::state);
}

TEST(SerializationTest, KrausInputNeedsOptIn) {
  const std::string path = kFixtures + "/identity_qubit_kraus.json";
  EXPECT_THROW(read_channel_file(path), InvalidInputError);
  EXPECT_EQ(read_channel_file(path, true).matrix, identity_channel(2).choi());
}

TEST(SerializationTest, MalformedInputs) {
  EXPECT_THROW(read_channel_file(kFixtures + "/malformed.json"), InvalidInputError);
  EXPECT_THROW(read_channel_file(kFixtures + "/does_not_exist.json"), InvalidInputError);
  auto parse = [](const std::string& s) { return channel_file_from_json(parse_json_text(s)); };
  EXPECT_THROW(parse(R"([1, 2])"), InvalidInputError);
  EXPECT_THROW(parse(R"({"kind": "gate", "dims": [1], "matrix": [[[1, 0]]]})"), InvalidInputError);
  EXPECT_THROW(parse(R"({"kind": "state", "dims": [0], "matrix": [[[1, 0]]]})"), InvalidInputError);
  EXPECT_THROW(parse(R"({"kind": "state", "dims": [2], "matrix": [[[1, 0]]]})"), DimensionError);
  EXPECT_THROW(parse(R"({"kind": "channel", "dims": [1], "matrix": [[[1, 0]]]})"), DimensionError);
  EXPECT_THROW(parse(R"({"kind": "state", "dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0]]]})"),
               InvalidInputError);
  EXPECT_THROW(parse(R"({"kind": "state", "dims": [1], "matrix": [[["1", 0]]]})"), InvalidInputError);
  EXPECT_THROW(parse(R"({"kind": "state", "dims": [1], "matrix": [[[1e999, 0]]]})"), InvalidInputError);
  EXPECT_THROW(parse(R"({"kind": "state", "dims": [1]})"), InvalidInputError);
  EXPECT_THROW(parse(R"({"kind": "channel", "dims": [1, 2], "kraus": [[[[1, 0]]]]})"), DimensionError);
}

TEST(SerializationTest, ReportsSerialize) {
  RMatrix p(2, 2);
  p << 0.5, 0.5, 0.25, 0.75;
  const json d = to_json(decompose_row_stochastic(StochasticMatrix(p)));
  EXPECT_EQ(d["weights"], json({0.5, 0.25, 0.25}));
  EXPECT_EQ(d["assignments"], json({{1, 1}, {0, 1}, {0, 0}}));

  const json v = to_json(c_l1_channel(identity_channel(2)));
  EXPECT_EQ(v["measure"], "l1");
  EXPECT_EQ(v["value"], 1.0);
  EXPECT_EQ(v["normalization"], 2.0);

  const json r = to_json(validate_superchannel(upsilon_superchannel(DimPair(1, 2))));
  EXPECT_TRUE(r["verdict"].get<bool>());
  EXPECT_TRUE(r.contains("block_trace_residual"));

  PropertyReport pr;
  pr.name = "x";
  pr.trials = 3;
  pr.pass = true;
  pr.worst_residual = -0.5;
  EXPECT_EQ(to_json(pr)["worst_residual"], -0.5);
}

TEST(SerializationTest, DoublesRoundTrip) {
  const double x = 0.1 + 0.2;
  EXPECT_EQ(json::parse(json(x).dump()).get<double>(), x);
}

}  // namespace
}  // namespace choicoh
