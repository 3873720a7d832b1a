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

#include "choicoh/channel.hpp"
#include "choicoh/coherence.hpp"
#include "choicoh/errors.hpp"
#include "choicoh/harness.hpp"
#include "choicoh/incoherent.hpp"
#include "choicoh/random.hpp"
#include "choicoh/serialization.hpp"
#include "choicoh/stochastic.hpp"
#include "choicoh/superchannel.hpp"
#include "choicoh/tensor_core.hpp"
