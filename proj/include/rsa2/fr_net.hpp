// Copyright 2026 The rsa2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSA2_FR_NET_HPP_
#define RSA2_FR_NET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsa2/conditional_table.hpp"
#include "rsa2/rhetorical.hpp"

namespace rsa2 {

// A 16 -> 16 -> 5 feed-forward network with sigmoid activations on every
// layer. The input is a triple-block one-hot (9 contexts, 5 utterances,
// 2 strategies); the output is the rhetorical-function value for each of the
// five meanings. Sigmoid outputs keep f_r strictly inside (0,1).
class FrNet {
 public:
  static constexpr std::size_t kInputDim = 16;
  static constexpr std::size_t kHiddenDim = 16;
  static constexpr std::size_t kOutputDim = 5;
  static constexpr std::size_t kContextBlock = 9;
  static constexpr std::size_t kUtteranceBlock = 5;
  static constexpr std::size_t kStrategyBlock = 2;
  // [w1 | b1 | w2 | b2] flattened row-major.
  static constexpr std::size_t kParamCount =
      kHiddenDim * kInputDim + kHiddenDim + kOutputDim * kHiddenDim + kOutputDim;

  // All-zero parameters (every output is sigmoid(0) = 0.5).
  FrNet();
  explicit FrNet(std::vector<double> params);

  // Uniform init in [-0.5, 0.5] scaled by 1/sqrt(fan-in), fully determined
  // by the seed.
  static FrNet seeded(std::uint64_t seed);

  const std::vector<double>& params() const { return params_; }
  std::vector<double>& mutable_params() { return params_; }

  std::vector<double> forward(const std::vector<double>& input) const;

  struct Trace {
    std::vector<double> input;
    std::vector<double> hidden;
    std::vector<double> output;
  };
  Trace forward_trace(const std::vector<double>& input) const;
  // Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
  void backward(const Trace& trace, const std::vector<double>& output_grad,
                std::vector<double>* grad) const;

  nlohmann::json to_json() const;
  static FrNet from_json(const nlohmann::json& j);

 private:
  std::vector<double> params_;
};

std::vector<double> fr_one_hot(std::size_t context, std::size_t utterance,
                               std::size_t strategy);

// One human judgement: which meaning was selected for a (context, utterance,
// strategy) triple.
struct FrSample {
  std::size_t context;
  std::size_t utterance;
  std::size_t strategy;
  std::size_t target_meaning;
};

// JSON rows: [{"c": 0-8, "u": 0-4, "r": 0-1, "target_m": 0-4}, ...]
std::vector<FrSample> fr_samples_from_json(const nlohmann::json& j);
nlohmann::json fr_samples_to_json(const std::vector<FrSample>& samples);

// The fixed probabilistic context the network is trained inside: the meaning
// prior P(m|c) and the human strategy posterior P(r|c,u) are data, not
// parameters, and stay frozen during training.
struct FrPipeline {
  LabelSpacePtr contexts;
  LabelSpacePtr meanings;
  LabelSpacePtr utterances;
  LabelSpacePtr strategies;
  ConditionalTable meaning_prior;       // given [context]
  ConditionalTable strategy_posterior;  // given [context, utterance]
  double alpha = 1.0;
};

// Mean negative log-likelihood of the selected meanings under the
// strategy-marginalized pragmatic listener built from the network's outputs,
// plus 0.5 * weight_decay * ||params||^2. Gradients run reverse-mode through
// the full normalized recursion. Throws NonFiniteLossError when a target
// meaning receives zero mass.
double fr_loss(const FrNet& net, const std::vector<FrSample>& batch,
               const FrPipeline& pipeline, double weight_decay);
std::pair<double, std::vector<double>> fr_loss_and_grad(
    const FrNet& net, const std::vector<FrSample>& batch,
    const FrPipeline& pipeline, double weight_decay);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct FrTrainConfig {
  AdamConfig optimizer;
  double weight_decay = 0.001;
  int epochs = 500;
  double train_fraction = 0.6;
  double val_fraction = 0.2;  // test split takes the remainder
  std::uint64_t seed = 0;
};

struct FrHistoryEntry {
  int epoch;
  double train_loss;  // data term only
  double val_loss;
};

struct FrTrainResult {
  FrNet best;  // checkpoint with minimal validation loss
  double best_val_loss;
  int best_epoch;
  std::vector<FrHistoryEntry> history;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
  std::vector<std::size_t> test_indices;
};

// Full-batch training with a deterministic seed-driven split and
// initialization. epochs = 0 returns the initialization with empty history.
FrTrainResult fr_train(const FrTrainConfig& config,
                       const std::vector<FrSample>& dataset,
                       const FrPipeline& pipeline);

// Materializes the learned function as a dense strategy set usable by the
// strategy-conditioned listeners.
StrategySet strategies_from_net(const FrNet& net, const LabelSpacePtr& contexts,
                                const LabelSpacePtr& meanings,
                                const LabelSpacePtr& utterances,
                                const LabelSpacePtr& strategies);

nlohmann::json fr_checkpoint_to_json(const FrNet& net,
                                     const FrTrainConfig& config,
                                     double val_loss);
FrNet fr_checkpoint_from_json(const nlohmann::json& j);

}  // namespace rsa2

#endif  // RSA2_FR_NET_HPP_
