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

#include "features.hpp"

namespace scenaware {

Matrix EmbedUtterance(const EmbeddingModel& model, const WindowSequence& windows) {
  if (windows.empty())
    Fail(ErrorKind::kTooShort, "utterance '" + windows.clip_id() + "' has no context windows");
  Require(windows.window_size() == model.input_dim(),
          "window shape does not match the model input");
  Matrix x(static_cast<Eigen::Index>(windows.size()), windows.window_size());
  for (std::size_t i = 0; i < windows.size(); ++i)
    x.row(static_cast<Eigen::Index>(i)) = windows.window(i);
  return ForwardBatch(model, x);
}

ScenarioVector MakeScenarioVector(const Matrix& embeddings, std::string utt_id) {
  Require(embeddings.rows() >= 1, "scenario vector needs at least one embedding");
  ScenarioVector v;
  v.values = embeddings.colwise().mean().transpose();
  v.utt_id = std::move(utt_id);
  v.num_windows_averaged = static_cast<std::size_t>(embeddings.rows());
  return v;
}

AssembledFeature AssembleFeatures(const MfccMatrix& base, const std::optional<Vector>& aux,
                                  const ScenarioVector& scenario) {
  Require(base.frames.rows() >= 1 && base.frames.cols() >= 1, "base feature matrix is empty");
  Require(scenario.values.size() >= 1, "scenario vector is empty");
  const Eigen::Index m_base = base.frames.cols();
  const Eigen::Index m_aux = aux ? aux->size() : 0;
  const Eigen::Index n = scenario.values.size();

  AssembledFeature out;
  out.base_dims = static_cast<int>(m_base + m_aux);
  out.scenario_dims = static_cast<int>(n);
  out.frames.resize(base.frames.rows(), m_base + m_aux + n);
  out.frames.leftCols(m_base) = base.frames;
  if (aux) out.frames.middleCols(m_base, m_aux).rowwise() = aux->transpose();
  out.frames.rightCols(n).rowwise() = scenario.values.transpose();
  return out;
}

}  // namespace scenaware
