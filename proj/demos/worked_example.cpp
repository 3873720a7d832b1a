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

// Walks through the main library calls on qubit examples.

#include <iomanip>
#include <iostream>

#include "choicoh/choicoh.hpp"

using namespace choicoh;

int main() {
  std::cout << std::setprecision(6);

  // Choi matrix of the qubit identity channel and its coherence.
  const Channel id = identity_channel(2);
  std::cout << "identity: C_l1 = " << c_l1_channel(id).value
            << ", C_rel_ent = " << c_rel_ent_channel(id).value << "\n";

  // Dephasing the Choi matrix gives an incoherent channel.
  const Channel ic = upsilon(id);
  std::cout << "upsilon(identity) incoherent: " << std::boolalpha << is_incoherent_channel(ic)
            << ", C_l1 = " << c_l1_channel(ic).value << "\n";

  // A classical channel splits into deterministic assignments.
  RMatrix p(2, 2);
  p << 0.5, 0.5, 0.25, 0.75;
  const ConvexDecomposition d = ic_decompose(classical_channel(StochasticMatrix(p)));
  for (std::size_t l = 0; l < d.terms.size(); ++l) {
    std::cout << "  weight " << d.weights[l] << " -> f = (" << d.terms[l](0) << ", "
              << d.terms[l](1) << ")\n";
  }

  // The Fourier channel attains the largest coherence.
  const Channel maxcoh = max_coherent_channel(DimPair(2, 2));
  std::cout << "max coherent 2x2: C_l1 = " << c_l1_channel(maxcoh).value
            << ", C_rel_ent = " << c_rel_ent_channel(maxcoh).value << "\n";

  // A superchannel acting on the identity: the Choi-dephasing superchannel.
  const Superchannel ups = upsilon_superchannel(DimPair(2, 2));
  std::cout << "superchannel valid: " << validate_superchannel(ups).verdict << "\n";
  const Channel image = apply_superchannel(ups, id);
  std::cout << "image equals dephasing: "
            << (max_abs(image.choi() - dephasing_channel(2).choi()) < 1e-12) << "\n";
  for (const SelectiveOutcome& o : selective_apply(upsilon_superkraus(DimPair(2, 2)), id))
    std::cout << "  outcome p = " << o.probability << "\n";
  return 0;
}
