#ifndef NUMLEARN_TRAINER_H_
#define NUMLEARN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "numlearn/agent.h"
#include "numlearn/need.h"
#include "numlearn/system.h"

namespace numlearn {

struct TrainConfig {
  int epochs = 30000;
  int batches_per_epoch = 5;
  int batch_size = 32;
  double alpha = 0.5;
  double sigma_start = 0.25;
  double sigma_end = 0.01;
  double step_size = 0.005;
  double baseline_decay = 0.9;
  bool use_baseline = true;
  double grad_clip_norm = 5.0;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on a non-positive field or
  // sigma_end > sigma_start.
  void Validate() const;
};

// sigma_start * (sigma_end / sigma_start)^(epoch / epochs).
double SigmaAt(const TrainConfig& config, int epoch);

class TrainingAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adam with the usual (0.9, 0.999, 1e-8) moments.
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t size, double step_size);
  void Step(std::span<double> params, std::span<const double> grad);
  long steps() const { return steps_; }

 private:
  double step_size_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double epsilon_ = 1e-8;
  long steps_ = 0;
  std::vector<double> m_, v_;
};

struct Example {
  std::span<const int> tokens;
  int target = 0;
};

// REINFORCE surrogate -(1/B) sum_i advantage_i * log N(action_i | mu_i, sigma)
// for frozen actions and advantages. Writes its gradient into `grad`
// (overwritten) and returns the loss.
double SurrogateLossAndGradient(const AgentParams& params,
                                std::span<const Example> batch,
                                std::span<const double> actions,
                                std::span<const double> advantages,
                                double sigma, std::span<double> grad);
double SurrogateLoss(const AgentParams& params, std::span<const Example> batch,
                     std::span<const double> actions,
                     std::span<const double> advantages, double sigma);

// Mutable state of one training run: parameters, optimizer moments, the
// reward baseline and the run's random stream.
class Learner {
 public:
  Learner(AgentParams params, const TrainConfig& config, std::uint64_t seed);

  // One policy-gradient update on `batch`; returns the mean reward.
  // Throws TrainingAborted on a non-finite gradient.
  double TrainStep(std::span<const Example> batch, double sigma);

  const AgentParams& params() const { return params_; }
  double baseline() const { return baseline_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  AgentParams params_;
  TrainConfig config_;
  AdamOptimizer optimizer_;
  double baseline_ = 0.0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  std::vector<double> grad_;
  LstmTrace trace_;
};

struct TracePoint {
  int epoch = 0;
  double accuracy = 0.0;
  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

// Called at epoch 0, every `interval` epochs and after the last epoch.
struct EvalHook {
  int interval = 300;
  std::function<double(int epoch, const AgentParams& params)> evaluate;
};

struct TrainResult {
  AgentParams params;
  std::vector<TracePoint> trace;
};

// epochs x batches_per_epoch steps on numerals drawn from `train`; fully
// determined by config.seed.
TrainResult TrainRun(const NumeralSystem& system, const NeedDistribution& train,
                     const TrainConfig& config, const EvalHook& hook);

// Sorted symbol set of a system, the agent's vocabulary.
std::vector<Symbol> SystemAlphabet(const NumeralSystem& system);

}  // namespace numlearn

#endif  // NUMLEARN_TRAINER_H_
