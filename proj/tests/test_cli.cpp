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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "choicoh/choicoh.hpp"
#include "cli.hpp"

namespace choicoh {
namespace {

const std::string kFixtures = CHOICOH_FIXTURES;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "choicoh");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST(CliTest, ValidateExitCodes) {
  const Result ok = run_cli({"validate", fixture("identity_qubit.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(json::parse(ok.out)["verdict"].get<bool>());
  const Result scaled = run_cli({"validate", fixture("scaled_identity.json")});
  EXPECT_EQ(scaled.code, 1);
  EXPECT_FALSE(json::parse(scaled.out)["verdict"].get<bool>());
  EXPECT_EQ(run_cli({"validate", fixture("malformed.json")}).code, 2);
  EXPECT_EQ(run_cli({"validate", fixture("missing.json")}).code, 2);
  EXPECT_EQ(run_cli({"validate", fixture("upsilon_super_2x2.json")}).code, 0);
  EXPECT_EQ(run_cli({"validate", fixture("plus_state.json")}).code, 0);
}

TEST(CliTest, KrausMode) {
  EXPECT_EQ(run_cli({"validate", fixture("identity_qubit_kraus.json")}).code, 2);
  EXPECT_EQ(run_cli({"--kraus", "validate", fixture("identity_qubit_kraus.json")}).code, 0);
  EXPECT_EQ(run_cli({"coherence", fixture("identity_qubit_kraus.json"), "--kraus"}).out, "1\n");
}

TEST(CliTest, CoherenceValues) {
  EXPECT_EQ(run_cli({"coherence", fixture("identity_qubit.json")}).out, "1\n");
  EXPECT_EQ(run_cli({"coherence", fixture("dephasing_qubit.json")}).out, "0\n");
  const Result maxcoh = run_cli({"coherence", fixture("maxcoh_2x2.json"), "--json"});
  EXPECT_EQ(maxcoh.code, 0);
  const json v = json::parse(maxcoh.out);
  EXPECT_NEAR(v["value"].get<double>(), 3.0, 1e-9);
  EXPECT_EQ(v["measure"], "l1");
  const Result re = run_cli({"coherence", fixture("identity_qubit.json"), "--measure", "rel_ent"});
  EXPECT_NEAR(std::stod(re.out), 1.0, 1e-12);
  EXPECT_EQ(run_cli({"coherence", fixture("plus_state.json")}).out, "1\n");
  EXPECT_EQ(run_cli({"coherence", fixture("identity_qubit.json"), "--measure", "bogus"}).code, 2);
  EXPECT_EQ(run_cli({"coherence", fixture("scaled_identity.json")}).code, 1);
}

TEST(CliTest, Classify) {
  const json classical = json::parse(run_cli({"--json", "classify", fixture("classical.json")}).out);
  EXPECT_TRUE(classical["incoherent"].get<bool>());
  EXPECT_EQ(classical["decomposition"]["weights"], json({0.5, 0.25, 0.25}));
  EXPECT_EQ(classical["decomposition"]["assignments"], json({{1, 1}, {0, 1}, {0, 0}}));
  const json id = json::parse(run_cli({"--json", "classify", fixture("identity_qubit.json")}).out);
  EXPECT_FALSE(id["incoherent"].get<bool>());
  EXPECT_TRUE(id["mio_condition"].get<bool>());
  EXPECT_FALSE(id.contains("decomposition"));
  const json deph = json::parse(run_cli({"--json", "classify", fixture("dephasing_qubit.json")}).out);
  EXPECT_EQ(deph["decomposition"]["weights"].size(), 1u);
  const Result text = run_cli({"classify", fixture("classical.json")});
  EXPECT_NE(text.out.find("decomposition: 3 term(s)"), std::string::npos);
}

TEST(CliTest, Maxcoh) {
  const std::string path = temp_path("choicoh_maxcoh.json");
  ASSERT_EQ(run_cli({"maxcoh", "2", "2", "--out", path}).code, 0);
  const ChannelFile written = read_channel_file(path);
  const ChannelFile expected = read_channel_file(fixture("maxcoh_2x2.json"));
  EXPECT_LT(max_abs(written.matrix - expected.matrix), 1e-15);
  std::filesystem::remove(path);

  const Result bad = run_cli({"maxcoh", "3", "2"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("requires |A| ≤ |B|"), std::string::npos);

  const json prep = json::parse(run_cli({"maxcoh", "1", "4"}).out);
  EXPECT_EQ(prep["dims"], json({1, 4}));
  EXPECT_LT(max_abs(matrix_from_json(prep["matrix"]) - CMatrix::Constant(4, 4, 0.25)), 1e-15);
  EXPECT_EQ(run_cli({"maxcoh", "0", "2"}).code, 2);
}

TEST(CliTest, SuperApply) {
  const Result r = run_cli({"superapply", fixture("upsilon_super_2x2.json"), fixture("identity_qubit.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const ChannelFile image = channel_file_from_json(json::parse(r.out));
  EXPECT_EQ(image.matrix, dephasing_channel(2).choi());

  const Result sel = run_cli({"--json", "superapply", fixture("upsilon_super_2x2.json"),
                              fixture("identity_qubit.json"), "--selective"});
  ASSERT_EQ(sel.code, 0) << sel.err;
  const json sel_doc = json::parse(sel.out);
  std::vector<double> probs;
  for (const json& o : sel_doc["outcomes"]) probs.push_back(o["probability"].get<double>());
  EXPECT_EQ(probs, (std::vector<double>{0.5, 0.0, 0.0, 0.5}));

  const Result mismatch =
      run_cli({"superapply", fixture("upsilon_super_2x2.json"), fixture("identity_qutrit.json")});
  EXPECT_EQ(mismatch.code, 2);
  EXPECT_EQ(run_cli({"superapply", fixture("identity_qubit.json"), fixture("identity_qubit.json")}).code, 2);
}

TEST(CliTest, Propcheck) {
  EXPECT_EQ(run_cli({"propcheck", "--trials", "0"}).code, 2);
  EXPECT_EQ(run_cli({"propcheck", "--dims", "2by2"}).code, 2);
  EXPECT_EQ(run_cli({"propcheck", "--property", "nope"}).code, 2);
  const std::vector<std::string> args = {"--json", "--seed", "17", "propcheck", "--trials", "5",
                                         "--dims", "2x2,1x3", "--property", "convexity_l1",
                                         "--property", "faithfulness_rel_ent"};
  const Result a = run_cli(args);
  const Result b = run_cli(args);
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  const json doc = json::parse(a.out);
  EXPECT_EQ(doc["properties"].size(), 2u);
  EXPECT_EQ(doc["seed"], 17);
  const Result text = run_cli({"propcheck", "--trials", "3", "--property", "maximal_coherence"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("PASS"), std::string::npos);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"validate"}).code, 2);
  EXPECT_EQ(run_cli({"--tol", "-1", "validate", fixture("identity_qubit.json")}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

}  // namespace
}  // namespace choicoh
