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

#include "rsa2/fr_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"
#include "rsa2/rng.hpp"
#include "rsa2/rsa.hpp"

namespace rsa2 {

namespace {

constexpr std::size_t kW1 = FrNet::kHiddenDim * FrNet::kInputDim;
constexpr std::size_t kB1 = FrNet::kHiddenDim;
constexpr std::size_t kW2 = FrNet::kOutputDim * FrNet::kHiddenDim;

constexpr std::size_t w1_at(std::size_t row, std::size_t col) {
  return row * FrNet::kInputDim + col;
}
constexpr std::size_t b1_at(std::size_t row) { return kW1 + row; }
constexpr std::size_t w2_at(std::size_t row, std::size_t col) {
  return kW1 + kB1 + row * FrNet::kHiddenDim + col;
}
constexpr std::size_t b2_at(std::size_t row) { return kW1 + kB1 + kW2 + row; }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_pipeline(const FrPipeline& pipeline) {
  if (pipeline.contexts->size() != FrNet::kContextBlock ||
      pipeline.utterances->size() != FrNet::kUtteranceBlock ||
      pipeline.strategies->size() != FrNet::kStrategyBlock ||
      pipeline.meanings->size() != FrNet::kOutputDim) {
    throw ShapeMismatchError(
        "network pipeline expects 9 contexts, 5 utterances, 2 strategies and "
        "5 meanings");
  }
}

// Backward step for y = a / sum(a): given g = dL/dy returns dL/da.
void normalize_backward(const std::vector<double>& y,
                        const std::vector<double>& g, double z,
                        std::vector<double>* out) {
  double dot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) dot += g[i] * y[i];
  out->resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) (*out)[i] = (g[i] - dot) / z;
}

}  // namespace

FrNet::FrNet() : params_(kParamCount, 0.0) {}

FrNet::FrNet(std::vector<double> params) : params_(std::move(params)) {
  if (params_.size() != kParamCount) {
    throw ShapeMismatchError("expected " + std::to_string(kParamCount) +
                             " parameters, got " +
                             std::to_string(params_.size()));
  }
}

FrNet FrNet::seeded(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> params(kParamCount);
  const double hidden_scale = 1.0 / std::sqrt(static_cast<double>(kInputDim));
  const double output_scale = 1.0 / std::sqrt(static_cast<double>(kHiddenDim));
  for (std::size_t i = 0; i < kW1 + kB1; ++i) {
    params[i] = uniform_in(rng, -0.5, 0.5) * hidden_scale;
  }
  for (std::size_t i = kW1 + kB1; i < kParamCount; ++i) {
    params[i] = uniform_in(rng, -0.5, 0.5) * output_scale;
  }
  return FrNet(std::move(params));
}

std::vector<double> FrNet::forward(const std::vector<double>& input) const {
  return forward_trace(input).output;
}

FrNet::Trace FrNet::forward_trace(const std::vector<double>& input) const {
  if (input.size() != kInputDim) {
    throw ShapeMismatchError("network input must have 16 entries");
  }
  Trace trace;
  trace.input = input;
  trace.hidden.resize(kHiddenDim);
  for (std::size_t h = 0; h < kHiddenDim; ++h) {
    double z = params_[b1_at(h)];
    for (std::size_t i = 0; i < kInputDim; ++i) {
      z += params_[w1_at(h, i)] * input[i];
    }
    trace.hidden[h] = sigmoid(z);
  }
  trace.output.resize(kOutputDim);
  for (std::size_t o = 0; o < kOutputDim; ++o) {
    double z = params_[b2_at(o)];
    for (std::size_t h = 0; h < kHiddenDim; ++h) {
      z += params_[w2_at(o, h)] * trace.hidden[h];
    }
    trace.output[o] = sigmoid(z);
  }
  return trace;
}

void FrNet::backward(const Trace& trace, const std::vector<double>& output_grad,
                     std::vector<double>* grad) const {
  if (output_grad.size() != kOutputDim || grad->size() != kParamCount) {
    throw ShapeMismatchError("backward called with mismatched shapes");
  }
  std::vector<double> dz2(kOutputDim);
  for (std::size_t o = 0; o < kOutputDim; ++o) {
    const double y = trace.output[o];
    dz2[o] = output_grad[o] * y * (1.0 - y);
  }
  std::vector<double> dhidden(kHiddenDim, 0.0);
  for (std::size_t o = 0; o < kOutputDim; ++o) {
    for (std::size_t h = 0; h < kHiddenDim; ++h) {
      (*grad)[w2_at(o, h)] += dz2[o] * trace.hidden[h];
      dhidden[h] += params_[w2_at(o, h)] * dz2[o];
    }
    (*grad)[b2_at(o)] += dz2[o];
  }
  for (std::size_t h = 0; h < kHiddenDim; ++h) {
    const double a = trace.hidden[h];
    const double dz1 = dhidden[h] * a * (1.0 - a);
    for (std::size_t i = 0; i < kInputDim; ++i) {
      (*grad)[w1_at(h, i)] += dz1 * trace.input[i];
    }
    (*grad)[b1_at(h)] += dz1;
  }
}

nlohmann::json FrNet::to_json() const {
  auto slice = [&](std::size_t begin, std::size_t end) {
    return std::vector<double>(params_.begin() + begin, params_.begin() + end);
  };
  return nlohmann::json{{"w1", slice(0, kW1)},
                        {"b1", slice(kW1, kW1 + kB1)},
                        {"w2", slice(kW1 + kB1, kW1 + kB1 + kW2)},
                        {"b2", slice(kW1 + kB1 + kW2, kParamCount)}};
}

FrNet FrNet::from_json(const nlohmann::json& j) {
  std::vector<double> params;
  params.reserve(kParamCount);
  for (const char* key : {"w1", "b1", "w2", "b2"}) {
    for (const auto& v : j.at(key)) params.push_back(v.get<double>());
  }
  return FrNet(std::move(params));
}

std::vector<double> fr_one_hot(std::size_t context, std::size_t utterance,
                               std::size_t strategy) {
  if (context >= FrNet::kContextBlock || utterance >= FrNet::kUtteranceBlock ||
      strategy >= FrNet::kStrategyBlock) {
    throw ShapeMismatchError("one-hot block index out of range");
  }
  std::vector<double> x(FrNet::kInputDim, 0.0);
  x[context] = 1.0;
  x[FrNet::kContextBlock + utterance] = 1.0;
  x[FrNet::kContextBlock + FrNet::kUtteranceBlock + strategy] = 1.0;
  return x;
}

std::vector<FrSample> fr_samples_from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw DataError("sample file must be a JSON array of rows");
  }
  std::vector<FrSample> samples;
  samples.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j.at(i);
    FrSample s{row.at("c").get<std::size_t>(), row.at("u").get<std::size_t>(),
               row.at("r").get<std::size_t>(),
               row.at("target_m").get<std::size_t>()};
    if (s.context >= FrNet::kContextBlock ||
        s.utterance >= FrNet::kUtteranceBlock ||
        s.strategy >= FrNet::kStrategyBlock ||
        s.target_meaning >= FrNet::kOutputDim) {
      throw DataError("sample row " + std::to_string(i) +
                      " has an index out of range");
    }
    samples.push_back(s);
  }
  return samples;
}

nlohmann::json fr_samples_to_json(const std::vector<FrSample>& samples) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : samples) {
    rows.push_back({{"c", s.context},
                    {"u", s.utterance},
                    {"r", s.strategy},
                    {"target_m", s.target_meaning}});
  }
  return rows;
}

namespace {

// Forward state of the full recursion for one context: the network is
// evaluated at every (utterance, strategy) pair, and the listener stack is
// normalized exactly as at inference time.
struct ContextStack {
  // indexed [strategy][utterance]
  std::vector<std::vector<FrNet::Trace>> traces;
  std::vector<std::vector<std::vector<double>>> l0;  // over meanings
  std::vector<std::vector<double>> z0;
  // indexed [strategy][meaning]
  std::vector<std::vector<std::vector<double>>> s1;  // over utterances
  std::vector<std::vector<double>> zs;
};

ContextStack build_stack(const FrNet& net, const FrPipeline& pipeline,
                         std::size_t context) {
  const std::size_t num_r = FrNet::kStrategyBlock;
  const std::size_t num_u = FrNet::kUtteranceBlock;
  const std::size_t num_m = FrNet::kOutputDim;
  const Categorical& prior =
      pipeline.meaning_prior.row(pipeline.contexts->label(context));

  ContextStack stack;
  stack.traces.assign(num_r, {});
  stack.l0.assign(num_r, std::vector<std::vector<double>>(
                             num_u, std::vector<double>(num_m, 0.0)));
  stack.z0.assign(num_r, std::vector<double>(num_u, 0.0));
  stack.s1.assign(num_r, std::vector<std::vector<double>>(
                             num_m, std::vector<double>(num_u, 0.0)));
  stack.zs.assign(num_r, std::vector<double>(num_m, 0.0));

  for (std::size_t r = 0; r < num_r; ++r) {
    stack.traces[r].reserve(num_u);
    for (std::size_t u = 0; u < num_u; ++u) {
      stack.traces[r].push_back(
          net.forward_trace(fr_one_hot(context, u, r)));
      const auto& f = stack.traces[r][u].output;
      double z0 = 0.0;
      for (std::size_t m = 0; m < num_m; ++m) {
        stack.l0[r][u][m] = f[m] * prior.prob(m);
        z0 += stack.l0[r][u][m];
      }
      stack.z0[r][u] = z0;
      for (std::size_t m = 0; m < num_m; ++m) stack.l0[r][u][m] /= z0;
    }
    // Uniform utterance prior: the constant cancels in the normalization.
    for (std::size_t m = 0; m < num_m; ++m) {
      double zs = 0.0;
      for (std::size_t u = 0; u < num_u; ++u) {
        stack.s1[r][m][u] = listener_power(stack.l0[r][u][m], pipeline.alpha);
        zs += stack.s1[r][m][u];
      }
      stack.zs[r][m] = zs;
      if (zs > 0.0) {
        for (std::size_t u = 0; u < num_u; ++u) stack.s1[r][m][u] /= zs;
      }
    }
  }
  return stack;
}

}  // namespace

double fr_loss(const FrNet& net, const std::vector<FrSample>& batch,
               const FrPipeline& pipeline, double weight_decay) {
  return fr_loss_and_grad(net, batch, pipeline, weight_decay).first;
}

std::pair<double, std::vector<double>> fr_loss_and_grad(
    const FrNet& net, const std::vector<FrSample>& batch,
    const FrPipeline& pipeline, double weight_decay) {
  check_pipeline(pipeline);
  if (batch.empty()) {
    throw EmptySplitError("cannot evaluate the loss on an empty batch");
  }
  const std::size_t num_r = FrNet::kStrategyBlock;
  const std::size_t num_u = FrNet::kUtteranceBlock;
  const std::size_t num_m = FrNet::kOutputDim;
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  // Group samples by context so each stack is built once.
  std::vector<std::vector<const FrSample*>> by_context(FrNet::kContextBlock);
  for (const auto& sample : batch) {
    by_context[sample.context].push_back(&sample);
  }

  double loss = 0.0;
  std::vector<double> grad(FrNet::kParamCount, 0.0);
  for (std::size_t c = 0; c < by_context.size(); ++c) {
    if (by_context[c].empty()) continue;
    const ContextStack stack = build_stack(net, pipeline, c);
    const Categorical& prior =
        pipeline.meaning_prior.row(pipeline.contexts->label(c));

    // d(loss)/d(f[r][u][m]) accumulated across the context's samples
    std::vector<std::vector<std::vector<double>>> df(
        num_r, std::vector<std::vector<double>>(
                   num_u, std::vector<double>(num_m, 0.0)));

    for (const FrSample* sample : by_context[c]) {
      const std::size_t u_obs = sample->utterance;
      const Categorical& rho = pipeline.strategy_posterior.row(
          pipeline.contexts->label(c), pipeline.utterances->label(u_obs));

      // forward: per-strategy L1 rows at the observed utterance
      std::vector<std::vector<double>> l1(num_r,
                                          std::vector<double>(num_m, 0.0));
      std::vector<double> z1(num_r, 0.0);
      std::vector<double> marginal(num_m, 0.0);
      for (std::size_t r = 0; r < num_r; ++r) {
        for (std::size_t m = 0; m < num_m; ++m) {
          l1[r][m] = stack.s1[r][m][u_obs] * prior.prob(m);
          z1[r] += l1[r][m];
        }
        if (z1[r] <= 0.0) {
          throw NonFiniteLossError(
              "pragmatic listener lost all mass for context " +
              pipeline.contexts->label(c));
        }
        for (std::size_t m = 0; m < num_m; ++m) {
          l1[r][m] /= z1[r];
          marginal[m] += rho.prob(r) * l1[r][m];
        }
      }
      const double p_target = marginal[sample->target_meaning];
      if (!(p_target > 0.0) || !std::isfinite(p_target)) {
        throw NonFiniteLossError("target meaning has zero listener mass");
      }
      loss += -std::log(p_target) * inv_n;

      // reverse
      std::vector<double> g_marginal(num_m, 0.0);
      g_marginal[sample->target_meaning] = -inv_n / p_target;
      for (std::size_t r = 0; r < num_r; ++r) {
        std::vector<double> g_l1(num_m);
        for (std::size_t m = 0; m < num_m; ++m) {
          g_l1[m] = rho.prob(r) * g_marginal[m];
        }
        std::vector<double> g_l1w;
        normalize_backward(l1[r], g_l1, z1[r], &g_l1w);
        for (std::size_t m = 0; m < num_m; ++m) {
          const double g_s1_obs = g_l1w[m] * prior.prob(m);
          if (stack.zs[r][m] <= 0.0) continue;
          const double dot = g_s1_obs * stack.s1[r][m][u_obs];
          for (std::size_t u = 0; u < num_u; ++u) {
            const double g_s1w =
                ((u == u_obs ? g_s1_obs : 0.0) - dot) / stack.zs[r][m];
            const double l0 = stack.l0[r][u][m];
            double dpow = 0.0;
            if (l0 > 0.0) {
              dpow = pipeline.alpha == 1.0
                         ? 1.0
                         : pipeline.alpha * std::pow(l0, pipeline.alpha - 1.0);
            }
            df[r][u][m] += g_s1w * dpow;  // placeholder: L0 backward below
          }
        }
      }
    }

    // Push the accumulated dL/dL0 through the L0 normalization and the
    // network. df currently holds dL/dL0; convert in place to dL/df.
    for (std::size_t r = 0; r < num_r; ++r) {
      for (std::size_t u = 0; u < num_u; ++u) {
        std::vector<double> g_w0;
        normalize_backward(stack.l0[r][u], df[r][u], stack.z0[r][u], &g_w0);
        std::vector<double> g_f(num_m);
        for (std::size_t m = 0; m < num_m; ++m) {
          g_f[m] = g_w0[m] * prior.prob(m);
        }
        net.backward(stack.traces[r][u], g_f, &grad);
      }
    }
  }

  if (weight_decay != 0.0) {
    double sq = 0.0;
    for (std::size_t i = 0; i < net.params().size(); ++i) {
      sq += net.params()[i] * net.params()[i];
      grad[i] += weight_decay * net.params()[i];
    }
    loss += 0.5 * weight_decay * sq;
  }
  return {loss, std::move(grad)};
}

FrTrainResult fr_train(const FrTrainConfig& config,
                       const std::vector<FrSample>& dataset,
                       const FrPipeline& pipeline) {
  check_pipeline(pipeline);
  if (config.train_fraction <= 0.0 || config.val_fraction <= 0.0 ||
      config.train_fraction + config.val_fraction > 1.0 + 1e-12) {
    throw ConfigError("split fractions must be positive and sum to at most 1");
  }

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  seeded_shuffle(order, rng);

  const auto n = static_cast<double>(dataset.size());
  const auto train_end = static_cast<std::size_t>(config.train_fraction * n);
  const auto val_end = static_cast<std::size_t>(
      (config.train_fraction + config.val_fraction) * n);

  FrTrainResult result;
  result.train_indices.assign(order.begin(), order.begin() + train_end);
  result.val_indices.assign(order.begin() + train_end,
                            order.begin() + val_end);
  result.test_indices.assign(order.begin() + val_end, order.end());
  if (result.train_indices.empty() || result.val_indices.empty()) {
    throw EmptySplitError("train or validation split is empty");
  }

  auto gather = [&](const std::vector<std::size_t>& indices) {
    std::vector<FrSample> subset;
    subset.reserve(indices.size());
    for (std::size_t i : indices) subset.push_back(dataset[i]);
    return subset;
  };
  const auto train_set = gather(result.train_indices);
  const auto val_set = gather(result.val_indices);

  FrNet net = FrNet::seeded(config.seed);
  result.best = net;
  result.best_epoch = 0;
  result.best_val_loss =
      fr_loss(net, val_set, pipeline, /*weight_decay=*/0.0);

  std::vector<double> m(FrNet::kParamCount, 0.0);
  std::vector<double> v(FrNet::kParamCount, 0.0);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto [_, grad] =
        fr_loss_and_grad(net, train_set, pipeline, config.weight_decay);
    auto& params = net.mutable_params();
    const double bias1 = 1.0 - std::pow(config.optimizer.beta1, epoch);
    const double bias2 = 1.0 - std::pow(config.optimizer.beta2, epoch);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = config.optimizer.beta1 * m[i] +
             (1.0 - config.optimizer.beta1) * grad[i];
      v[i] = config.optimizer.beta2 * v[i] +
             (1.0 - config.optimizer.beta2) * grad[i] * grad[i];
      params[i] -= config.optimizer.learning_rate * (m[i] / bias1) /
                   (std::sqrt(v[i] / bias2) + config.optimizer.epsilon);
    }

    const double train_loss =
        fr_loss(net, train_set, pipeline, /*weight_decay=*/0.0);
    const double val_loss =
        fr_loss(net, val_set, pipeline, /*weight_decay=*/0.0);
    result.history.push_back(FrHistoryEntry{epoch, train_loss, val_loss});
    if (val_loss < result.best_val_loss) {
      result.best = net;
      result.best_val_loss = val_loss;
      result.best_epoch = epoch;
    }
  }
  return result;
}

StrategySet strategies_from_net(const FrNet& net, const LabelSpacePtr& contexts,
                                const LabelSpacePtr& meanings,
                                const LabelSpacePtr& utterances,
                                const LabelSpacePtr& strategies) {
  if (contexts->size() != FrNet::kContextBlock ||
      utterances->size() != FrNet::kUtteranceBlock ||
      strategies->size() != FrNet::kStrategyBlock ||
      meanings->size() != FrNet::kOutputDim) {
    throw ShapeMismatchError(
        "network spaces must be 9 contexts, 5 utterances, 2 strategies and "
        "5 meanings");
  }
  std::vector<RhetoricalFunction> functions;
  for (std::size_t r = 0; r < strategies->size(); ++r) {
    std::vector<double> table(contexts->size() * meanings->size() *
                              utterances->size());
    for (std::size_t c = 0; c < contexts->size(); ++c) {
      for (std::size_t u = 0; u < utterances->size(); ++u) {
        const auto f = net.forward(fr_one_hot(c, u, r));
        for (std::size_t m = 0; m < meanings->size(); ++m) {
          table[(c * meanings->size() + m) * utterances->size() + u] = f[m];
        }
      }
    }
    functions.push_back(RhetoricalFunction::from_table(
        strategies->label(r), contexts, meanings, utterances,
        std::move(table)));
  }
  return StrategySet(strategies, std::move(functions));
}

nlohmann::json fr_checkpoint_to_json(const FrNet& net,
                                     const FrTrainConfig& config,
                                     double val_loss) {
  return nlohmann::json{
      {"arch", {FrNet::kInputDim, FrNet::kHiddenDim, FrNet::kOutputDim}},
      {"params", net.to_json()},
      {"val_loss", val_loss},
      {"config",
       {{"learning_rate", config.optimizer.learning_rate},
        {"weight_decay", config.weight_decay},
        {"epochs", config.epochs},
        {"train_fraction", config.train_fraction},
        {"val_fraction", config.val_fraction},
        {"seed", config.seed}}}};
}

FrNet fr_checkpoint_from_json(const nlohmann::json& j) {
  return FrNet::from_json(j.at("params"));
}

}  // namespace rsa2
