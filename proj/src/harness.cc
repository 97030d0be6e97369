#include "numlearn/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace numlearn {

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kTestStream = 2;

std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream,
                         std::uint64_t index) {
  return Mix(Mix(Mix(master) ^ stream) ^ index);
}

void ParallelFor(std::size_t count, int width,
                 const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(width, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<int> DrawTestSet(const EvalProtocol& protocol, std::uint64_t seed) {
  std::vector<int> targets;
  if (protocol.full_enumeration) {
    for (int n = kMinNumber; n <= kMaxNumber; ++n) targets.push_back(n);
    return targets;
  }
  std::mt19937_64 rng(seed);
  auto sampler = protocol.test.MakeSampler();
  targets.reserve(protocol.test_size);
  for (int i = 0; i < protocol.test_size; ++i) {
    targets.push_back(NeedDistribution::Draw(sampler, rng));
  }
  return targets;
}

double EvaluateAccuracy(const AgentParams& params, std::span<const int> targets,
                        const NumeralSystem& system) {
  if (targets.empty()) return 0.0;
  int hits = 0;
  for (int n : targets) {
    const double mu = Forward(params, system.at(n));
    hits += std::lround(100.0 * mu) == n ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(targets.size());
}

double Auc(std::span<const TracePoint> trace) {
  if (trace.size() < 2) throw std::invalid_argument("Auc: need >= 2 points");
  double area = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double width = trace[i].epoch - trace[i - 1].epoch;
    if (width <= 0) throw std::invalid_argument("Auc: epochs must increase");
    area += 0.5 * width * (trace[i].accuracy + trace[i - 1].accuracy);
  }
  return area / (trace.back().epoch - trace.front().epoch);
}

LearnabilityResult Aggregate(std::vector<RunResult> runs) {
  LearnabilityResult out;
  out.per_run = std::move(runs);
  double sum = 0.0;
  for (const auto& r : out.per_run) {
    if (!r.ok()) continue;
    sum += r.auc;
    ++out.completed;
  }
  if (out.completed == 0) return out;
  out.learnability = sum / out.completed;
  if (out.completed > 1) {
    double ss = 0.0;
    for (const auto& r : out.per_run) {
      if (r.ok()) ss += (r.auc - out.learnability) * (r.auc - out.learnability);
    }
    out.auc_stddev = std::sqrt(ss / (out.completed - 1));
  }
  return out;
}

RunResult RunRepetition(const NumeralSystem& system, const NeedDistribution& train,
                        const EvalProtocol& protocol, TrainConfig config,
                        std::uint64_t master_seed, int repetition) {
  RunResult run;
  run.seed = DeriveSeed(master_seed, kTrainStream, repetition);
  config.seed = run.seed;
  const auto targets =
      DrawTestSet(protocol, DeriveSeed(master_seed, kTestStream, repetition));
  EvalHook hook{protocol.eval_interval,
                [&](int, const AgentParams& params) {
                  return EvaluateAccuracy(params, targets, system);
                }};
  try {
    run.trace = TrainRun(system, train, config, hook).trace;
    run.auc = Auc(run.trace);
  } catch (const TrainingAborted& e) {
    run.error = e.what();
  }
  return run;
}

LearnabilityResult MeasureLearnability(const NumeralSystem& system,
                                       const NeedDistribution& train,
                                       const EvalProtocol& protocol,
                                       const TrainConfig& config,
                                       int repetitions,
                                       std::uint64_t master_seed,
                                       int parallel) {
  return MeasureLearnabilityMany(std::span<const NumeralSystem>(&system, 1),
                                 train, protocol, config, repetitions,
                                 master_seed, parallel)
      .front();
}

std::vector<LearnabilityResult> MeasureLearnabilityMany(
    std::span<const NumeralSystem> systems, const NeedDistribution& train,
    const EvalProtocol& protocol, const TrainConfig& config, int repetitions,
    std::uint64_t master_seed, int parallel) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  config.Validate();
  std::vector<RunResult> runs(systems.size() * repetitions);
  ParallelFor(runs.size(), parallel, [&](std::size_t job) {
    const std::size_t s = job / repetitions;
    const int rep = static_cast<int>(job % repetitions);
    runs[job] = RunRepetition(systems[s], train, protocol, config, master_seed, rep);
  });
  std::vector<LearnabilityResult> out;
  out.reserve(systems.size());
  for (std::size_t s = 0; s < systems.size(); ++s) {
    std::vector<RunResult> mine(
        std::make_move_iterator(runs.begin() + s * repetitions),
        std::make_move_iterator(runs.begin() + (s + 1) * repetitions));
    out.push_back(Aggregate(std::move(mine)));
  }
  return out;
}

}  // namespace numlearn
