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

#include <set>

#include "choicoh/incoherent.hpp"
#include "choicoh/random.hpp"
#include "oracles.hpp"

namespace choicoh {
namespace {

CMatrix upsilon_oracle(const Channel& phi) {
  // Delta^B o phi o Delta^A evaluated as a map, then re-encoded.
  auto map = [&](const CMatrix& x) {
    return oracle::dephase(oracle::apply_via_choi(phi.choi(), phi.dA(), phi.dB(), oracle::dephase(x)));
  };
  return oracle::choi_of(map, phi.dA(), phi.dB());
}

TEST(UpsilonTest, MatchesMapDefinition) {
  Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    const DimPair dims(uniform_int(rng, 1, 3), uniform_int(rng, 1, 4));
    const Channel phi = random_channel(dims, rng);
    EXPECT_LT(max_abs(upsilon(phi).choi() - upsilon_oracle(phi)), 1e-14);
  }
}

TEST(UpsilonTest, IdentityBecomesDephasing) {
  EXPECT_EQ(upsilon(identity_channel(2)).choi(), dephasing_channel(2).choi());
  EXPECT_TRUE(is_incoherent_channel(dephasing_channel(3)));
  EXPECT_FALSE(is_incoherent_channel(identity_channel(2)));
  // |B| = 1: the trace is the only channel and it is incoherent.
  EXPECT_TRUE(is_incoherent_channel(Channel::from_choi(CMatrix::Identity(3, 3), DimPair(3, 1))));
}

TEST(UpsilonTest, IdempotentAndFixesIncoherent) {
  Rng rng(32);
  for (int t = 0; t < 40; ++t) {
    const DimPair dims(uniform_int(rng, 1, 3), uniform_int(rng, 1, 3));
    const Channel phi = random_channel(dims, rng);
    const Channel u = upsilon(phi);
    EXPECT_EQ(upsilon(u).choi(), u.choi());
    EXPECT_TRUE(is_incoherent_channel(u));
    EXPECT_TRUE(validate_channel(u.choi(), dims, 1e-10).verdict);
    const Channel ic = random_ic_channel(dims, rng);
    EXPECT_EQ(upsilon(ic).choi(), ic.choi());
  }
}

TEST(UpsilonTest, ConvexCombinationOfIncoherentIsIncoherent) {
  Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    const DimPair dims(uniform_int(rng, 1, 3), uniform_int(rng, 1, 3));
    const double p = uniform_real(rng);
    const CMatrix mix = p * random_ic_channel(dims, rng).choi() + (1 - p) * random_ic_channel(dims, rng).choi();
    EXPECT_TRUE(is_incoherent_channel(Channel::from_choi(mix, dims)));
  }
}

TEST(UpsilonTest, ToleranceBoundary) {
  CMatrix j = dephasing_channel(2).choi();
  j(0, 3) = j(3, 0) = 1e-10;
  const Channel near = Channel::from_choi_unchecked(j, DimPair(2, 2));
  EXPECT_TRUE(is_incoherent_channel(near, 1e-9));
  EXPECT_FALSE(is_incoherent_channel(near, 1e-11));
}

TEST(AssignmentTest, EnumerationIsLexicographicAndComplete) {
  std::vector<std::vector<int>> seen;
  for_each_assignment(DimPair(2, 3), [&](const DeterministicAssignment& f) { seen.push_back(f.targets()); });
  ASSERT_EQ(seen.size(), 9u);
  EXPECT_EQ(seen.front(), (std::vector<int>{0, 0}));
  EXPECT_EQ(seen[1], (std::vector<int>{0, 1}));
  EXPECT_EQ(seen.back(), (std::vector<int>{2, 2}));
  EXPECT_EQ(assignment_count(DimPair(3, 2)), 8u);
  EXPECT_EQ(assignment_count(DimPair(2, 1)), 1u);
  EXPECT_EQ(assignment_count(DimPair(200, 5)), UINT64_MAX);
}

TEST(AssignmentTest, DeterministicChannel) {
  const DeterministicAssignment f({1, 0, 1}, 2);
  const Channel c = deterministic_ic(f, DimPair(3, 2));
  EXPECT_TRUE(validate_channel(c.choi(), c.dims()).verdict);
  EXPECT_TRUE(is_incoherent_channel(c));
  RMatrix expected(3, 2);
  expected << 0, 1, 1, 0, 0, 1;
  EXPECT_EQ(f.matrix(), expected);
  EXPECT_THROW(DeterministicAssignment({2}, 2), DimensionError);
  EXPECT_THROW(deterministic_ic(f, DimPair(2, 2)), DimensionError);
}

TEST(DecompositionTest, HandExample) {
  RMatrix p(2, 2);
  p << 0.5, 0.5, 0.25, 0.75;
  const ConvexDecomposition d = decompose_row_stochastic(StochasticMatrix(p));
  ASSERT_EQ(d.weights.size(), 3u);
  EXPECT_EQ(d.weights, (std::vector<double>{0.5, 0.25, 0.25}));
  EXPECT_EQ(d.terms[0].targets(), (std::vector<int>{1, 1}));
  EXPECT_EQ(d.terms[1].targets(), (std::vector<int>{0, 1}));
  EXPECT_EQ(d.terms[2].targets(), (std::vector<int>{0, 0}));
  EXPECT_EQ(d.reconstruct(), p);
}

TEST(DecompositionTest, DeterministicInputGivesOneTerm) {
  RMatrix p(3, 2);
  p << 0, 1, 1, 0, 0, 1;
  const ConvexDecomposition d = decompose_row_stochastic(StochasticMatrix(p));
  ASSERT_EQ(d.terms.size(), 1u);
  EXPECT_EQ(d.weights[0], 1.0);
  EXPECT_EQ(d.terms[0].targets(), (std::vector<int>{1, 0, 1}));
}

TEST(DecompositionTest, UniformRowsWithTies) {
  RMatrix p = RMatrix::Constant(3, 4, 0.25);
  const ConvexDecomposition d = decompose_row_stochastic(StochasticMatrix(p));
  EXPECT_EQ(d.terms.size(), 4u);
  EXPECT_LT((d.reconstruct() - p).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DecompositionTest, RandomMatricesRespectBound) {
  Rng rng(34);
  for (int t = 0; t < 300; ++t) {
    const int m = uniform_int(rng, 1, 5);
    const int n = uniform_int(rng, 1, 5);
    const StochasticMatrix p = random_stochastic(m, n, rng);
    const ConvexDecomposition d = decompose_row_stochastic(p);
    EXPECT_LE(static_cast<int>(d.terms.size()), m * (n - 1) + 1);
    double sum = 0.0;
    for (double w : d.weights) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    EXPECT_LT((d.reconstruct() - p.matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(DecompositionTest, IcDecomposeRoundTrip) {
  Rng rng(35);
  for (int t = 0; t < 50; ++t) {
    const DimPair dims(uniform_int(rng, 1, 3), uniform_int(rng, 1, 3));
    const Channel chi = random_ic_channel(dims, rng);
    const ConvexDecomposition d = ic_decompose(chi);
    CMatrix sum = CMatrix::Zero(dims.total(), dims.total());
    for (std::size_t l = 0; l < d.terms.size(); ++l) sum += d.weights[l] * deterministic_ic(d.terms[l], dims).choi();
    EXPECT_LT(max_abs(sum - chi.choi()), 1e-9);
  }
  EXPECT_THROW(ic_decompose(identity_channel(2)), InvalidInputError);
}

TEST(DecompositionTest, DephasingIsSingleTerm) {
  const ConvexDecomposition d = ic_decompose(dephasing_channel(3));
  ASSERT_EQ(d.terms.size(), 1u);
  EXPECT_EQ(d.terms[0].targets(), (std::vector<int>{0, 1, 2}));
}

}  // namespace
}  // namespace choicoh
