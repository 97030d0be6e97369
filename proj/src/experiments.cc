#include "numlearn/experiments.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "numlearn/dfa.h"
#include "numlearn/generators.h"

namespace numlearn {

namespace {

constexpr std::uint64_t kBaselineStream = 3;
constexpr std::uint64_t kNeighbourhoodStream = 4;

using nlohmann::json;

void Require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("ExperimentConfig: " + what);
}

}  // namespace

void ExperimentConfig::Validate() const {
  train.Validate();
  Require(repetitions >= 1, "repetitions must be >= 1");
  Require(eval_interval >= 1, "eval_interval must be >= 1");
  Require(parallel >= 1, "parallel must be >= 1");
  Require(random_baselines >= 0, "random_baselines must be >= 0");
  Require(neighbourhood_random_variants >= 0,
          "neighbourhood_random_variants must be >= 0");
  Require(exclude_small_neighbourhoods >= 0,
          "exclude_small_neighbourhoods must be >= 0");
  NeedDistribution::FromName(train_dist);
  NeedDistribution::FromName(test_dist);
}

ExperimentConfig ProfileConfig(const std::string& profile) {
  ExperimentConfig config;
  if (profile == "desk") {
    config.train.epochs = 3000;
    config.repetitions = 5;
    config.eval_interval = 100;
  } else if (profile == "paper") {
    config.train.epochs = 30000;
    config.repetitions = 20;
    config.eval_interval = 300;
  } else {
    throw std::invalid_argument("unknown profile '" + profile + "'");
  }
  config.profile = profile;
  return config;
}

ExperimentConfig ApplyJsonConfig(const std::string& json_text,
                                 ExperimentConfig config) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: expected an object");
  if (doc.contains("profile")) {
    // Profile first so that explicit keys override it.
    config = ProfileConfig(doc["profile"].get<std::string>());
  }
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "profile") continue;
      else if (key == "epochs") config.train.epochs = value.get<int>();
      else if (key == "batches_per_epoch") config.train.batches_per_epoch = value.get<int>();
      else if (key == "batch_size") config.train.batch_size = value.get<int>();
      else if (key == "alpha") config.train.alpha = value.get<double>();
      else if (key == "sigma_start") config.train.sigma_start = value.get<double>();
      else if (key == "sigma_end") config.train.sigma_end = value.get<double>();
      else if (key == "step_size") config.train.step_size = value.get<double>();
      else if (key == "baseline_decay") config.train.baseline_decay = value.get<double>();
      else if (key == "use_baseline") config.train.use_baseline = value.get<bool>();
      else if (key == "grad_clip_norm") config.train.grad_clip_norm = value.get<double>();
      else if (key == "repetitions") config.repetitions = value.get<int>();
      else if (key == "eval_interval") config.eval_interval = value.get<int>();
      else if (key == "train_dist") config.train_dist = value.get<std::string>();
      else if (key == "test_dist") config.test_dist = value.get<std::string>();
      else if (key == "full_enumeration") config.full_enumeration = value.get<bool>();
      else if (key == "seed") config.master_seed = value.get<std::uint64_t>();
      else if (key == "parallel") config.parallel = value.get<int>();
      else if (key == "builtin_systems") config.builtin_systems = value.get<std::vector<std::string>>();
      else if (key == "random_baselines") config.random_baselines = value.get<int>();
      else if (key == "systems_dir") config.systems_dir = value.get<std::string>();
      else if (key == "neighbourhood_bases") config.neighbourhood_bases = value.get<std::vector<std::string>>();
      else if (key == "neighbourhood_random_variants") config.neighbourhood_random_variants = value.get<int>();
      else if (key == "exclude_small_neighbourhoods") config.exclude_small_neighbourhoods = value.get<int>();
      else if (key == "out") config.out_dir = value.get<std::string>();
      else throw std::invalid_argument("unknown key");
    } catch (const json::exception&) {
      throw std::invalid_argument("config: bad value for '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return config;
}

std::string ConfigToJson(const ExperimentConfig& c) {
  json doc = {
      {"profile", c.profile},
      {"epochs", c.train.epochs},
      {"batches_per_epoch", c.train.batches_per_epoch},
      {"batch_size", c.train.batch_size},
      {"alpha", c.train.alpha},
      {"sigma_start", c.train.sigma_start},
      {"sigma_end", c.train.sigma_end},
      {"step_size", c.train.step_size},
      {"baseline_decay", c.train.baseline_decay},
      {"use_baseline", c.train.use_baseline},
      {"grad_clip_norm", c.train.grad_clip_norm},
      {"repetitions", c.repetitions},
      {"eval_interval", c.eval_interval},
      {"train_dist", c.train_dist},
      {"test_dist", c.test_dist},
      {"full_enumeration", c.full_enumeration},
      {"seed", c.master_seed},
      {"parallel", c.parallel},
      {"builtin_systems", c.builtin_systems},
      {"random_baselines", c.random_baselines},
      {"systems_dir", c.systems_dir},
      {"neighbourhood_bases", c.neighbourhood_bases},
      {"neighbourhood_random_variants", c.neighbourhood_random_variants},
      {"exclude_small_neighbourhoods", c.exclude_small_neighbourhoods},
      {"out", c.out_dir},
  };
  return doc.dump(2);
}

NumeralSystem RandomBaseline(std::uint64_t master_seed, int k) {
  const std::uint64_t seed = DeriveSeed(master_seed, kBaselineStream, k);
  return GenerateRandomSystem(RandomLexicon(seed), seed,
                              "random_" + std::to_string(k));
}

std::vector<PopulationEntry> BuildPopulation(const ExperimentConfig& config,
                                             std::vector<std::string>* skipped) {
  std::vector<PopulationEntry> out;
  for (const auto& name : config.builtin_systems) {
    out.push_back({BuiltinSystem(name), "regular"});
  }
  for (int k = 0; k < config.random_baselines; ++k) {
    out.push_back({RandomBaseline(config.master_seed, k), "random"});
  }
  if (!config.systems_dir.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry :
         std::filesystem::directory_iterator(config.systems_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      try {
        NumeralSystem system = ReadSystemFile(path.string());
        const auto report = ValidateSystem(system);
        if (!report.accepted()) {
          throw std::runtime_error(path.string() + ": " + report.Summary());
        }
        out.push_back({std::move(system), "ingested"});
      } catch (const std::exception& e) {
        if (skipped != nullptr) skipped->push_back(e.what());
      }
    }
  }
  return out;
}

SystemRow DescribeSystem(const NumeralSystem& system, const std::string& group) {
  SystemRow row;
  row.system_id = system.name();
  row.group = group;
  row.irregularity_bits = Irregularity(system, kMinNumber, kMaxNumber).bits;
  row.local_irregularity_bits = LocalIrregularity(system);
  const SystemStats stats = ComputeStats(system);
  row.lexicon_size_atoms = stats.lexicon_size_atoms;
  row.avg_complexity = stats.avg_complexity();
  return row;
}

namespace {

EvalProtocol MakeProtocol(const ExperimentConfig& config) {
  EvalProtocol protocol;
  protocol.test = NeedDistribution::FromName(config.test_dist);
  protocol.eval_interval = config.eval_interval;
  protocol.full_enumeration = config.full_enumeration;
  return protocol;
}

void Fill(SystemRow& row, const LearnabilityResult& result,
          const ExperimentConfig& config) {
  row.learnability = result.learnability;
  row.auc_stddev = result.auc_stddev;
  row.repetitions = config.repetitions;
  row.completed = result.completed;
  row.seed = config.master_seed;
}

int CountAborted(const std::vector<LearnabilityResult>& results) {
  int aborted = 0;
  for (const auto& r : results) {
    aborted += static_cast<int>(r.per_run.size()) - r.completed;
  }
  return aborted;
}

NamedFit FitRows(const std::string& name, const std::vector<SystemRow>& rows,
                 const std::string& group, bool on_complexity, bool on_local) {
  NamedFit out;
  out.name = name;
  out.x = on_complexity ? "avg_complexity"
          : on_local    ? "local_irregularity_bits"
                        : "irregularity_bits";
  out.y = "learnability";
  std::vector<double> x, y;
  for (const auto& row : rows) {
    if (row.completed == 0) continue;
    if (!group.empty() && row.group != group) continue;
    x.push_back(on_complexity ? row.avg_complexity
                : on_local    ? row.local_irregularity_bits
                              : row.irregularity_bits);
    y.push_back(row.learnability);
  }
  try {
    out.fit = FitOls(x, y, 3);
  } catch (const std::invalid_argument& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

SweepResult RunSweep(const ExperimentConfig& config) {
  config.Validate();
  SweepResult result;
  const auto population = BuildPopulation(config, &result.skipped);
  std::vector<NumeralSystem> systems;
  for (const auto& entry : population) {
    result.rows.push_back(DescribeSystem(entry.system, entry.group));
    systems.push_back(entry.system);
  }
  result.learnability = MeasureLearnabilityMany(
      systems, NeedDistribution::FromName(config.train_dist),
      MakeProtocol(config), config.train, config.repetitions,
      config.master_seed, config.parallel);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    Fill(result.rows[i], result.learnability[i], config);
  }
  result.aborted_runs = CountAborted(result.learnability);
  result.fits = {
      FitRows("global", result.rows, "", false, false),
      FitRows("regular", result.rows, "regular", false, false),
      FitRows("random", result.rows, "random", false, false),
      FitRows("complexity_random", result.rows, "random", true, false),
      FitRows("local_global", result.rows, "", false, true),
  };
  return result;
}

SweepResult RunExp1(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.train_dist = "power";
  c.test_dist = "power";
  return RunSweep(c);
}

SweepResult RunExp2(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.train_dist = "power";
  c.test_dist = "uniform";
  return RunSweep(c);
}

Exp3Result RunExp3(const ExperimentConfig& config) {
  config.Validate();
  Exp3Result result;
  struct Job {
    std::size_t report;
    NumeralSystem system;
  };
  std::vector<Job> jobs;
  for (std::size_t b = 0; b < config.neighbourhood_bases.size(); ++b) {
    const auto& name = config.neighbourhood_bases[b];
    NeighbourhoodReport report;
    report.base = name;
    try {
      const Neighbourhood hood =
          BuildNeighbourhood(BuiltinSystem(name),
                             DeriveSeed(config.master_seed, kNeighbourhoodStream, b),
                             config.neighbourhood_random_variants);
      report.size = hood.size();
      report.varying_numbers = hood.varying_numbers();
      const NumeralSystem* most = nullptr;
      const NumeralSystem* least = nullptr;
      for (const auto& v : hood.variants) {
        if (v.label == "most_regular") most = &v.system;
        if (v.label == "least_regular") least = &v.system;
      }
      if (most == nullptr || least == nullptr || *most == *least) {
        report.status = "no_variation";
      } else if (report.size <= config.exclude_small_neighbourhoods) {
        report.status = "excluded_small";
      } else {
        report.status = "fit";
        for (const auto& v : hood.variants) {
          SystemRow row = DescribeSystem(v.system, "variant");
          row.system_id = v.label;
          report.variants.push_back(row);
          jobs.push_back({result.neighbourhoods.size(), v.system});
        }
      }
    } catch (const std::exception& e) {
      report.status = "error";
      report.error = e.what();
    }
    result.neighbourhoods.push_back(std::move(report));
  }

  std::vector<NumeralSystem> systems;
  for (const auto& job : jobs) systems.push_back(job.system);
  const auto measured = MeasureLearnabilityMany(
      systems, NeedDistribution::FromName(config.train_dist),
      MakeProtocol(config), config.train, config.repetitions,
      config.master_seed, config.parallel);
  result.aborted_runs = CountAborted(measured);
  std::vector<std::size_t> cursor(result.neighbourhoods.size(), 0);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& report = result.neighbourhoods[jobs[j].report];
    Fill(report.variants[cursor[jobs[j].report]++], measured[j], config);
  }

  Exp3Summary& s = result.summary;
  s.neighbourhoods = static_cast<int>(result.neighbourhoods.size());
  std::vector<double> slopes;
  for (auto& report : result.neighbourhoods) {
    if (report.status != "fit") continue;
    NamedFit fit = FitRows("neighbourhood", report.variants, "", false, false);
    if (!fit.fit) {
      report.status = "error";
      report.error = fit.error;
      continue;
    }
    report.fit = fit.fit;
    slopes.push_back(fit.fit->slope);
    if (fit.fit->slope < 0) ++s.negative_slopes;
    double most = 0.0, least = 0.0;
    for (const auto& row : report.variants) {
      if (row.system_id == "most_regular") most = row.learnability;
      if (row.system_id == "least_regular") least = row.learnability;
    }
    if (most >= least) ++s.most_ge_least;
  }
  s.fitted = static_cast<int>(slopes.size());
  if (!slopes.empty()) {
    double sum = 0.0;
    for (double v : slopes) sum += v;
    s.mean_slope = sum / slopes.size();
    if (slopes.size() > 1) {
      double ss = 0.0;
      for (double v : slopes) ss += (v - s.mean_slope) * (v - s.mean_slope);
      s.stderr_mean_slope =
          std::sqrt(ss / (slopes.size() - 1)) / std::sqrt(slopes.size());
    }
  }
  return result;
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

void WriteResultsCsv(std::ostream& out, const std::vector<SystemRow>& rows) {
  out << "system_id,irregularity_bits,local_irregularity_bits,"
         "lexicon_size_atoms,avg_complexity,learnability,auc_stddev,"
         "repetitions,seed,group\n";
  for (const auto& r : rows) {
    out << r.system_id << ',' << FormatDouble(r.irregularity_bits) << ','
        << FormatDouble(r.local_irregularity_bits) << ','
        << r.lexicon_size_atoms << ',' << FormatDouble(r.avg_complexity) << ','
        << FormatDouble(r.learnability) << ',' << FormatDouble(r.auc_stddev)
        << ',' << r.repetitions << ',' << r.seed << ',' << r.group << '\n';
  }
}

void WriteFitsCsv(std::ostream& out, const std::vector<NamedFit>& fits) {
  out << "fit,x,y,slope,intercept,stderr_slope,n_points,error\n";
  for (const auto& f : fits) {
    out << f.name << ',' << f.x << ',' << f.y << ',';
    if (f.fit) {
      out << FormatDouble(f.fit->slope) << ',' << FormatDouble(f.fit->intercept)
          << ',' << FormatDouble(f.fit->stderr_slope) << ',' << f.fit->n_points
          << ",\n";
    } else {
      out << ",,,0," << f.error << '\n';
    }
  }
}

void WriteTraceCsv(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "epoch,accuracy\n";
  for (const auto& p : trace) out << p.epoch << ',' << FormatDouble(p.accuracy) << '\n';
}

void WriteExp3VariantsCsv(std::ostream& out, const Exp3Result& result) {
  out << "neighbourhood,variant,irregularity_bits,local_irregularity_bits,"
         "lexicon_size_atoms,avg_complexity,learnability,auc_stddev,"
         "repetitions,seed\n";
  for (const auto& n : result.neighbourhoods) {
    for (const auto& r : n.variants) {
      out << n.base << ',' << r.system_id << ','
          << FormatDouble(r.irregularity_bits) << ','
          << FormatDouble(r.local_irregularity_bits) << ','
          << r.lexicon_size_atoms << ',' << FormatDouble(r.avg_complexity)
          << ',' << FormatDouble(r.learnability) << ','
          << FormatDouble(r.auc_stddev) << ',' << r.completed << ',' << r.seed
          << '\n';
    }
  }
}

void WriteExp3FitsCsv(std::ostream& out, const Exp3Result& result) {
  out << "neighbourhood,status,size,varying_numbers,slope,intercept,"
         "stderr_slope,n_points,error\n";
  for (const auto& n : result.neighbourhoods) {
    out << n.base << ',' << n.status << ',' << FormatDouble(n.size) << ','
        << n.varying_numbers << ',';
    if (n.fit) {
      out << FormatDouble(n.fit->slope) << ',' << FormatDouble(n.fit->intercept)
          << ',' << FormatDouble(n.fit->stderr_slope) << ',' << n.fit->n_points;
    } else {
      out << ",,,0";
    }
    out << ',' << n.error << '\n';
  }
}

void WriteExp3SummaryCsv(std::ostream& out, const Exp3Summary& s) {
  out << "neighbourhoods,fitted,mean_slope,stderr_mean_slope,negative_slopes,"
         "most_ge_least\n"
      << s.neighbourhoods << ',' << s.fitted << ',' << FormatDouble(s.mean_slope)
      << ',' << FormatDouble(s.stderr_mean_slope) << ',' << s.negative_slopes
      << ',' << s.most_ge_least << '\n';
}

namespace {

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void WriteSweep(const std::filesystem::path& dir, const SweepResult& result) {
  std::filesystem::create_directories(dir / "traces");
  {
    auto out = OpenOut(dir / "results.csv");
    WriteResultsCsv(out, result.rows);
  }
  {
    auto out = OpenOut(dir / "fits.csv");
    WriteFitsCsv(out, result.fits);
  }
  for (std::size_t s = 0; s < result.rows.size(); ++s) {
    const auto& runs = result.learnability[s].per_run;
    for (std::size_t k = 0; k < runs.size(); ++k) {
      auto out = OpenOut(dir / "traces" /
                         (result.rows[s].system_id + "_rep" +
                          std::to_string(k) + ".csv"));
      WriteTraceCsv(out, runs[k].trace);
    }
  }
}

void WriteExp3(const std::filesystem::path& dir, const Exp3Result& result) {
  std::filesystem::create_directories(dir);
  {
    auto out = OpenOut(dir / "exp3_variants.csv");
    WriteExp3VariantsCsv(out, result);
  }
  {
    auto out = OpenOut(dir / "exp3_fits.csv");
    WriteExp3FitsCsv(out, result);
  }
  auto out = OpenOut(dir / "exp3_summary.csv");
  WriteExp3SummaryCsv(out, result.summary);
}

std::pair<std::vector<double>, std::vector<double>> ReadColumns(
    const std::string& path, const std::string& x_column,
    const std::string& y_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path, 1, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw FormatError(path, 1, "no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t xi = find(x_column), yi = find(y_column);
  std::vector<double> xs, ys;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    auto number = [&](std::size_t i) {
      if (i >= cells.size()) throw FormatError(path, line_no, "short row");
      double v = 0.0;
      const auto& s = cells[i];
      const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw FormatError(path, line_no, "not a number: '" + s + "'");
      }
      return v;
    };
    xs.push_back(number(xi));
    ys.push_back(number(yi));
  }
  return {xs, ys};
}

}  // namespace numlearn
