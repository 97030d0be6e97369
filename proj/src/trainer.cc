#include "numlearn/trainer.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace numlearn {

void TrainConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("TrainConfig: ") + what);
  };
  require(epochs > 0, "epochs must be positive");
  require(batches_per_epoch > 0, "batches_per_epoch must be positive");
  require(batch_size > 0, "batch_size must be positive");
  require(alpha > 0, "alpha must be positive");
  require(sigma_start > 0 && sigma_end > 0, "sigma must be positive");
  require(sigma_end <= sigma_start, "sigma_end must not exceed sigma_start");
  require(step_size > 0, "step_size must be positive");
  require(baseline_decay >= 0 && baseline_decay < 1,
          "baseline_decay must be in [0, 1)");
  require(grad_clip_norm > 0, "grad_clip_norm must be positive");
}

double SigmaAt(const TrainConfig& config, int epoch) {
  const double t = static_cast<double>(epoch) / config.epochs;
  return config.sigma_start *
         std::pow(config.sigma_end / config.sigma_start, t);
}

AdamOptimizer::AdamOptimizer(std::size_t size, double step_size)
    : step_size_(step_size), m_(size, 0.0), v_(size, 0.0) {}

void AdamOptimizer::Step(std::span<double> params,
                         std::span<const double> grad) {
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= step_size_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + epsilon_);
  }
}

namespace {

// d/dmu of -advantage * log N(action | mu, sigma), chained through the
// logistic head.
double LogitGradient(double mu, double action, double advantage,
                     double sigma) {
  const double dlogp_dmu = (action - mu) / (sigma * sigma);
  return -advantage * dlogp_dmu * mu * (1.0 - mu);
}

}  // namespace

double SurrogateLossAndGradient(const AgentParams& params,
                                std::span<const Example> batch,
                                std::span<const double> actions,
                                std::span<const double> advantages,
                                double sigma, std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  LstmTrace trace;
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double mu = ForwardTokens(params, batch[i].tokens, &trace);
    loss -= advantages[i] * GaussianLogDensity(actions[i], mu, sigma);
    BackwardFromLogit(params, trace,
                      scale * LogitGradient(mu, actions[i], advantages[i], sigma),
                      grad);
  }
  return loss * scale;
}

double SurrogateLoss(const AgentParams& params, std::span<const Example> batch,
                     std::span<const double> actions,
                     std::span<const double> advantages, double sigma) {
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double mu = ForwardTokens(params, batch[i].tokens);
    loss -= advantages[i] * GaussianLogDensity(actions[i], mu, sigma);
  }
  return loss / static_cast<double>(batch.size());
}

Learner::Learner(AgentParams params, const TrainConfig& config,
                 std::uint64_t seed)
    : params_(std::move(params)),
      config_(config),
      optimizer_(params_.values().size(), config.step_size),
      rng_(seed),
      grad_(params_.values().size(), 0.0) {}

double Learner::TrainStep(std::span<const Example> batch, double sigma) {
  if (batch.empty()) throw std::invalid_argument("TrainStep: empty batch");
  std::fill(grad_.begin(), grad_.end(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  const double baseline = config_.use_baseline ? baseline_ : 0.0;
  double reward_sum = 0.0;
  for (const Example& ex : batch) {
    const double mu = ForwardTokens(params_, ex.tokens, &trace_);
    const double action = mu + sigma * noise_(rng_);
    const double reward = Reward(100.0 * action, ex.target, config_.alpha);
    reward_sum += reward;
    BackwardFromLogit(params_, trace_,
                      scale * LogitGradient(mu, action, reward - baseline, sigma),
                      grad_);
  }

  double norm2 = 0.0;
  for (double g : grad_) norm2 += g * g;
  if (!std::isfinite(norm2)) {
    throw TrainingAborted("non-finite gradient after " +
                          std::to_string(optimizer_.steps()) + " steps");
  }
  const double norm = std::sqrt(norm2);
  if (norm > config_.grad_clip_norm) {
    const double shrink = config_.grad_clip_norm / norm;
    for (double& g : grad_) g *= shrink;
  }
  optimizer_.Step(params_.values(), grad_);

  const double mean_reward = reward_sum * scale;
  baseline_ = config_.baseline_decay * baseline_ +
              (1.0 - config_.baseline_decay) * mean_reward;
  return mean_reward;
}

std::vector<Symbol> SystemAlphabet(const NumeralSystem& system) {
  std::set<Symbol> symbols;
  for (const auto& [n, numeral] : system.numerals()) {
    symbols.insert(numeral.symbols().begin(), numeral.symbols().end());
  }
  return {symbols.begin(), symbols.end()};
}

TrainResult TrainRun(const NumeralSystem& system, const NeedDistribution& train,
                     const TrainConfig& config, const EvalHook& hook) {
  config.Validate();
  std::mt19937_64 init_rng(config.seed);
  AgentParams initial = AgentParams::Initialize(SystemAlphabet(system), init_rng);

  std::vector<std::vector<int>> encoded(kMaxNumber + 1);
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    encoded[n] = initial.Encode(system.at(n));
  }
  // The sampling stream continues from the initialisation stream.
  Learner learner(std::move(initial), config, init_rng());
  auto sampler = train.MakeSampler();

  TrainResult result{learner.params(), {}};
  auto evaluate = [&](int epoch) {
    if (hook.evaluate) {
      result.trace.push_back({epoch, hook.evaluate(epoch, learner.params())});
    }
  };
  evaluate(0);
  std::vector<Example> batch(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double sigma = SigmaAt(config, epoch);
    for (int b = 0; b < config.batches_per_epoch; ++b) {
      for (auto& ex : batch) {
        const int n = NeedDistribution::Draw(sampler, learner.rng());
        ex = Example{encoded[n], n};
      }
      learner.TrainStep(batch, sigma);
    }
    const int done = epoch + 1;
    if (done == config.epochs || (hook.interval > 0 && done % hook.interval == 0)) {
      evaluate(done);
    }
  }
  result.params = learner.params();
  return result;
}

}  // namespace numlearn
