/* Copyright (c) 2026 The scenaware Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "dsp.hpp"
#include "embedder.hpp"

namespace scenaware {

struct ScenarioVector {
  Vector values;
  std::string utt_id;
  std::size_t num_windows_averaged = 0;
};

struct AssembledFeature {
  Matrix frames;            // num_frames x (M + N)
  int base_dims = 0;        // M: MFCC + aux
  int scenario_dims = 0;    // N
};

// One unit-norm embedding per window, rows in window order.
Matrix EmbedUtterance(const EmbeddingModel& model, const WindowSequence& windows);

// Arithmetic mean of the rows, not re-normalized.
ScenarioVector MakeScenarioVector(const Matrix& embeddings, std::string utt_id = {});

// Row t = [mfcc_t ; aux ; scenario].
AssembledFeature AssembleFeatures(const MfccMatrix& base, const std::optional<Vector>& aux,
                                  const ScenarioVector& scenario);

}  // namespace scenaware
