#ifndef NUMLEARN_HARNESS_H_
#define NUMLEARN_HARNESS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "numlearn/agent.h"
#include "numlearn/need.h"
#include "numlearn/system.h"
#include "numlearn/trainer.h"

namespace numlearn {

// SplitMix64 finalizer over (master, stream, index); used to give every
// (system, repetition) job an independent, order-free seed.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream,
                         std::uint64_t index);

// Runs fn(0..count-1) on up to `width` threads. Exceptions are rethrown
// (the lowest index first) after all work finishes.
void ParallelFor(std::size_t count, int width,
                 const std::function<void(std::size_t)>& fn);

struct EvalProtocol {
  NeedDistribution test = NeedDistribution::PowerLaw();
  int test_size = 99;
  int eval_interval = 300;
  // Use each of 1..99 exactly once instead of sampling.
  bool full_enumeration = false;
};

std::vector<int> DrawTestSet(const EvalProtocol& protocol, std::uint64_t seed);

// Fraction of targets n with round(100 * mu(numeral n)) == n.
double EvaluateAccuracy(const AgentParams& params, std::span<const int> targets,
                        const NumeralSystem& system);

// Trapezoid area under (epoch, accuracy) divided by the epoch span.
// Throws std::invalid_argument on fewer than two points or non-increasing
// epochs.
double Auc(std::span<const TracePoint> trace);

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<TracePoint> trace;
  double auc = 0.0;
  std::string error;  // non-empty if the run aborted
  bool ok() const { return error.empty(); }
};

struct LearnabilityResult {
  std::vector<RunResult> per_run;
  double learnability = 0.0;  // mean AUC over completed runs
  double auc_stddev = 0.0;    // sample standard deviation
  int completed = 0;
};

LearnabilityResult Aggregate(std::vector<RunResult> runs);

// The run seed depends only on (master_seed, repetition), so different
// systems measured under one master seed see the same test sets.
RunResult RunRepetition(const NumeralSystem& system, const NeedDistribution& train,
                        const EvalProtocol& protocol, TrainConfig config,
                        std::uint64_t master_seed, int repetition);

LearnabilityResult MeasureLearnability(const NumeralSystem& system,
                                       const NeedDistribution& train,
                                       const EvalProtocol& protocol,
                                       const TrainConfig& config,
                                       int repetitions,
                                       std::uint64_t master_seed,
                                       int parallel = 1);

// (system x repetition) fan-out; results in input order.
std::vector<LearnabilityResult> MeasureLearnabilityMany(
    std::span<const NumeralSystem> systems, const NeedDistribution& train,
    const EvalProtocol& protocol, const TrainConfig& config, int repetitions,
    std::uint64_t master_seed, int parallel = 1);

}  // namespace numlearn

#endif  // NUMLEARN_HARNESS_H_
