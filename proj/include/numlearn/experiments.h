#ifndef NUMLEARN_EXPERIMENTS_H_
#define NUMLEARN_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "numlearn/harness.h"
#include "numlearn/regression.h"
#include "numlearn/system.h"
#include "numlearn/trainer.h"

namespace numlearn {

struct ExperimentConfig {
  std::string profile = "desk";
  TrainConfig train;
  int repetitions = 5;
  int eval_interval = 100;
  std::string train_dist = "power";
  std::string test_dist = "uniform";
  bool full_enumeration = false;
  std::uint64_t master_seed = 1;
  int parallel = 1;

  // Population for experiments 1 and 2.
  std::vector<std::string> builtin_systems = {"mandarin", "base20",
                                              "french_like"};
  int random_baselines = 10;
  std::string systems_dir;  // extra ingested systems; empty = none

  // Experiment 3.
  std::vector<std::string> neighbourhood_bases = {"mandarin", "base20",
                                                  "french_like", "basque_like"};
  int neighbourhood_random_variants = 3;
  int exclude_small_neighbourhoods = 10;

  std::string out_dir = "out";

  // Throws std::invalid_argument on an unusable setting.
  void Validate() const;
};

// "desk": 3,000 epochs, 5 repetitions, evaluation every 100 epochs.
// "paper": 30,000 epochs, 20 repetitions, evaluation every 300 epochs.
ExperimentConfig ProfileConfig(const std::string& profile);

// Overlays the keys present in a JSON object onto `config`. Unknown keys
// are rejected. Throws std::invalid_argument with the offending key.
ExperimentConfig ApplyJsonConfig(const std::string& json_text,
                                 ExperimentConfig config);
std::string ConfigToJson(const ExperimentConfig& config);

struct PopulationEntry {
  NumeralSystem system;
  std::string group;  // "regular", "random" or "ingested"
};

// Builtins, seeded random baselines, then sorted *.txt files from
// systems_dir. Invalid systems are skipped and described in `skipped`.
std::vector<PopulationEntry> BuildPopulation(const ExperimentConfig& config,
                                             std::vector<std::string>* skipped);

// The k-th random baseline of a master seed.
NumeralSystem RandomBaseline(std::uint64_t master_seed, int k);

struct SystemRow {
  std::string system_id;
  std::string group;
  double irregularity_bits = 0.0;
  double local_irregularity_bits = 0.0;
  int lexicon_size_atoms = 0;
  double avg_complexity = 0.0;
  double learnability = 0.0;
  double auc_stddev = 0.0;
  int repetitions = 0;
  int completed = 0;
  std::uint64_t seed = 0;
};

SystemRow DescribeSystem(const NumeralSystem& system, const std::string& group);

struct NamedFit {
  std::string name;  // e.g. "global", "regular", "random", "complexity_random"
  std::string x, y;
  std::optional<RegressionFit> fit;
  std::string error;  // why the fit was refused
};

struct SweepResult {
  std::vector<SystemRow> rows;
  std::vector<LearnabilityResult> learnability;  // parallel to rows
  std::vector<NamedFit> fits;
  std::vector<std::string> skipped;
  int aborted_runs = 0;
};

// Experiment 1 forces p = q = power law, experiment 2 p = power law and
// q = uniform. Both report the same family of fits.
SweepResult RunExp1(const ExperimentConfig& config);
SweepResult RunExp2(const ExperimentConfig& config);
// Shared body: learnability of the population under the config's
// distributions.
SweepResult RunSweep(const ExperimentConfig& config);

struct NeighbourhoodReport {
  std::string base;
  double size = 0.0;
  int varying_numbers = 0;
  // "fit", "excluded_small", "no_variation" or "error".
  std::string status;
  std::vector<SystemRow> variants;  // label in system_id
  std::optional<RegressionFit> fit;
  std::string error;
};

struct Exp3Summary {
  int neighbourhoods = 0;
  int fitted = 0;
  double mean_slope = 0.0;
  double stderr_mean_slope = 0.0;
  int negative_slopes = 0;
  // Among fitted neighbourhoods: learnability(most_regular) >=
  // learnability(least_regular).
  int most_ge_least = 0;
};

struct Exp3Result {
  std::vector<NeighbourhoodReport> neighbourhoods;
  Exp3Summary summary;
  int aborted_runs = 0;
};

Exp3Result RunExp3(const ExperimentConfig& config);

// CSV writers; numbers use fixed printf formats so output is byte-stable.
void WriteResultsCsv(std::ostream& out, const std::vector<SystemRow>& rows);
void WriteFitsCsv(std::ostream& out, const std::vector<NamedFit>& fits);
void WriteTraceCsv(std::ostream& out, const std::vector<TracePoint>& trace);
void WriteExp3VariantsCsv(std::ostream& out, const Exp3Result& result);
void WriteExp3FitsCsv(std::ostream& out, const Exp3Result& result);
void WriteExp3SummaryCsv(std::ostream& out, const Exp3Summary& summary);

// results.csv, fits.csv and traces/<system>_rep<k>.csv under `dir`.
void WriteSweep(const std::filesystem::path& dir, const SweepResult& result);
// exp3_variants.csv, exp3_fits.csv, exp3_summary.csv under `dir`.
void WriteExp3(const std::filesystem::path& dir, const Exp3Result& result);

// Reads a CSV with a header row; returns the named numeric columns.
// Throws FormatError on missing columns or non-numeric cells.
std::pair<std::vector<double>, std::vector<double>> ReadColumns(
    const std::string& path, const std::string& x_column,
    const std::string& y_column);

std::string FormatDouble(double value);

}  // namespace numlearn

#endif  // NUMLEARN_EXPERIMENTS_H_
