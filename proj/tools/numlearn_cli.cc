// numlearn: measure numeral systems, generate variants, run experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "numlearn/dfa.h"
#include "numlearn/experiments.h"
#include "numlearn/generators.h"
#include "numlearn/harness.h"
#include "numlearn/regression.h"
#include "numlearn/system.h"
#include "numlearn/trainer.h"

namespace fs = std::filesystem;
using namespace numlearn;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitAbort = 3;

// A builtin name, or a path to a system file.
NumeralSystem LoadSystem(const std::string& ref) {
  if (fs::exists(ref)) {
    NumeralSystem system = ReadSystemFile(ref);
    const auto report = ValidateSystem(system);
    if (!report.accepted()) {
      throw std::invalid_argument(ref + ": " + report.Summary());
    }
    return system;
  }
  return BuiltinSystem(ref);
}

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

nlohmann::json LexiconJson(const LexiconSpec& lex) {
  std::vector<std::string> combinators;
  for (SymbolKind k : lex.combinators) combinators.push_back(Symbol{k, 0}.ToString());
  return {{"digits", lex.digits},
          {"multipliers", lex.multipliers},
          {"combinators", combinators}};
}

struct ExperimentFlags {
  std::string config_file;
  std::optional<std::string> profile, systems_dir, out, train_dist, test_dist;
  std::optional<int> epochs, reps, eval_interval, parallel, exclude_small,
      random_variants;
  std::optional<std::uint64_t> seed;

  void Register(CLI::App* app, bool neighbourhoods) {
    app->add_option("--config", config_file, "JSON config file");
    app->add_option("--profile", profile, "paper or desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    app->add_option("--systems-dir", systems_dir, "extra *.txt systems");
    app->add_option("--out", out, "output directory");
    app->add_option("--epochs", epochs);
    app->add_option("--reps", reps);
    app->add_option("--eval-interval", eval_interval);
    app->add_option("--seed", seed, "master seed");
    app->add_option("--parallel", parallel, "worker threads");
    app->add_option("--train-dist", train_dist)
        ->check(CLI::IsMember({"power", "uniform"}));
    app->add_option("--test-dist", test_dist)
        ->check(CLI::IsMember({"power", "uniform"}));
    if (neighbourhoods) {
      app->add_option("--exclude-small-neighbourhoods", exclude_small,
                      "skip neighbourhoods with at most N systems");
      app->add_option("--random-variants", random_variants,
                      "random interior variants per neighbourhood");
    }
  }

  ExperimentConfig Resolve() const {
    ExperimentConfig config = ProfileConfig(profile.value_or("desk"));
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw std::runtime_error("cannot open " + config_file);
      std::stringstream ss;
      ss << in.rdbuf();
      config = ApplyJsonConfig(ss.str(), config);
      if (profile) {
        // --profile on the command line wins over the file's profile, but
        // the file's other keys still apply.
        ExperimentConfig p = ProfileConfig(*profile);
        config.profile = p.profile;
        config.train.epochs = p.train.epochs;
        config.repetitions = p.repetitions;
        config.eval_interval = p.eval_interval;
      }
    }
    if (systems_dir) config.systems_dir = *systems_dir;
    if (out) config.out_dir = *out;
    if (epochs) config.train.epochs = *epochs;
    if (reps) config.repetitions = *reps;
    if (eval_interval) config.eval_interval = *eval_interval;
    if (seed) config.master_seed = *seed;
    if (parallel) config.parallel = *parallel;
    if (train_dist) config.train_dist = *train_dist;
    if (test_dist) config.test_dist = *test_dist;
    if (exclude_small) config.exclude_small_neighbourhoods = *exclude_small;
    if (random_variants) config.neighbourhood_random_variants = *random_variants;
    config.Validate();
    return config;
  }
};

void PrintFits(const std::vector<NamedFit>& fits) {
  for (const auto& f : fits) {
    if (f.fit) {
      std::printf("  %-18s slope=%.6g (se %.3g) intercept=%.6g n=%d\n",
                  f.name.c_str(), f.fit->slope, f.fit->stderr_slope,
                  f.fit->intercept, f.fit->n_points);
    } else {
      std::printf("  %-18s refused: %s\n", f.name.c_str(), f.error.c_str());
    }
  }
}

int RunSweepCommand(const ExperimentFlags& flags, int which) {
  const ExperimentConfig config = flags.Resolve();
  std::fprintf(stderr, "exp%d: %d epochs, %d reps, parallel %d\n", which,
               config.train.epochs, config.repetitions, config.parallel);
  const SweepResult result = which == 1 ? RunExp1(config) : RunExp2(config);
  for (const auto& s : result.skipped) std::fprintf(stderr, "skipped: %s\n", s.c_str());
  const fs::path dir = config.out_dir;
  WriteSweep(dir, result);
  {
    auto out = OpenOut(dir / "config.json");
    out << ConfigToJson(config) << '\n';
  }
  for (const auto& row : result.rows) {
    std::printf("%-16s %-8s irr=%9.2f learnability=%.4f\n", row.system_id.c_str(),
                row.group.c_str(), row.irregularity_bits, row.learnability);
  }
  PrintFits(result.fits);
  std::printf("wrote %s\n", dir.string().c_str());
  return result.aborted_runs > 0 ? kExitAbort : 0;
}

int RunExp3Command(const ExperimentFlags& flags) {
  const ExperimentConfig config = flags.Resolve();
  const Exp3Result result = RunExp3(config);
  const fs::path dir = config.out_dir;
  WriteExp3(dir, result);
  {
    auto out = OpenOut(dir / "config.json");
    out << ConfigToJson(config) << '\n';
  }
  for (const auto& n : result.neighbourhoods) {
    std::printf("%-12s %-15s size=%-10.4g", n.base.c_str(), n.status.c_str(), n.size);
    if (n.fit) std::printf(" slope=%.6g", n.fit->slope);
    if (!n.error.empty()) std::printf(" (%s)", n.error.c_str());
    std::printf("\n");
  }
  const auto& s = result.summary;
  std::printf("fitted %d/%d, mean slope %.6g (se %.3g), negative %d, most>=least %d\n",
              s.fitted, s.neighbourhoods, s.mean_slope, s.stderr_mean_slope,
              s.negative_slopes, s.most_ge_least);
  return result.aborted_runs > 0 ? kExitAbort : 0;
}

int Dispatch(int argc, char** argv) {
  CLI::App app{"Regularity and learnability of numeral systems"};
  app.require_subcommand(1);

  // measure
  auto* measure = app.add_subcommand("measure", "DFA irregularity of systems");
  std::vector<std::string> measure_refs;
  std::string measure_dir, measure_out;
  int lo = kMinNumber, hi = kMaxNumber;
  measure->add_option("systems", measure_refs, "builtin names or system files");
  measure->add_option("--systems-dir", measure_dir, "measure every *.txt here");
  measure->add_option("--lo", lo)->check(CLI::Range(kMinNumber, kMaxNumber));
  measure->add_option("--hi", hi)->check(CLI::Range(kMinNumber, kMaxNumber));
  measure->add_option("--out", measure_out, "CSV path (default stdout)");

  // generate
  auto* generate = app.add_subcommand("generate", "write generated systems");
  generate->require_subcommand(1);
  auto* gen_random = generate->add_subcommand("random", "a random baseline");
  std::uint64_t gen_seed = 1;
  std::string gen_out = ".", gen_like;
  gen_random->add_option("--seed", gen_seed);
  gen_random->add_option("--out", gen_out, "output directory");
  gen_random->add_option("--like", gen_like,
                         "reuse the lexicon of this system instead of drawing one");
  auto* gen_hood = generate->add_subcommand("neighbourhood", "a local neighbourhood");
  std::string hood_base;
  int hood_random = 0;
  gen_hood->add_option("--base", hood_base, "builtin name or system file")->required();
  gen_hood->add_option("--seed", gen_seed);
  gen_hood->add_option("--random-variants", hood_random);
  gen_hood->add_option("--out", gen_out, "output directory");

  // train
  auto* train = app.add_subcommand("train", "one training run with its trace");
  std::string train_system;
  TrainConfig train_config;
  train_config.epochs = 3000;
  std::uint64_t train_seed = 1;
  int train_eval = 100;
  std::string train_dist = "power", test_dist = "uniform", train_out;
  train->add_option("--system", train_system)->required();
  train->add_option("--epochs", train_config.epochs);
  train->add_option("--seed", train_seed);
  train->add_option("--eval-interval", train_eval);
  train->add_option("--train-dist", train_dist)->check(CLI::IsMember({"power", "uniform"}));
  train->add_option("--test-dist", test_dist)->check(CLI::IsMember({"power", "uniform"}));
  train->add_option("--out", train_out, "trace CSV path");

  ExperimentFlags exp1_flags, exp2_flags, exp3_flags;
  auto* exp1 = app.add_subcommand("exp1", "power-law train and test");
  exp1_flags.Register(exp1, false);
  auto* exp2 = app.add_subcommand("exp2", "power-law train, uniform test");
  exp2_flags.Register(exp2, false);
  auto* exp3 = app.add_subcommand("exp3", "local neighbourhoods");
  exp3_flags.Register(exp3, true);

  auto* regress = app.add_subcommand("regress", "OLS on two CSV columns");
  std::string regress_in, regress_x = "irregularity_bits", regress_y = "learnability";
  regress->add_option("--in", regress_in)->required();
  regress->add_option("--x", regress_x);
  regress->add_option("--y", regress_y);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (*measure) {
    std::vector<NumeralSystem> systems;
    for (const auto& ref : measure_refs) systems.push_back(LoadSystem(ref));
    if (!measure_dir.empty()) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(measure_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) systems.push_back(LoadSystem(f.string()));
    }
    if (systems.empty()) throw std::invalid_argument("measure: no systems given");
    if (lo > hi) throw std::invalid_argument("measure: --lo exceeds --hi");
    std::ostringstream csv;
    csv << "name,bits,state_count,transition_count,alphabet_size,local_bits\n";
    for (const auto& s : systems) {
      const IrregularityScore score = Irregularity(s, lo, hi);
      csv << s.name() << ',' << FormatDouble(score.bits) << ','
          << score.state_count << ',' << score.transition_count << ','
          << score.alphabet_size << ',' << FormatDouble(LocalIrregularity(s))
          << '\n';
    }
    if (measure_out.empty()) {
      std::cout << csv.str();
    } else {
      OpenOut(measure_out) << csv.str();
    }
    return 0;
  }

  if (*gen_random) {
    const LexiconSpec lexicon =
        gen_like.empty() ? RandomLexicon(gen_seed) : InferLexicon(LoadSystem(gen_like));
    const NumeralSystem system = GenerateRandomSystem(lexicon, gen_seed);
    const fs::path dir = gen_out;
    const fs::path file = dir / (system.name() + ".txt");
    {
      auto out = OpenOut(file);
      WriteSystem(out, system);
    }
    nlohmann::json manifest = {{"kind", "random"},
                               {"seed", gen_seed},
                               {"lexicon", LexiconJson(lexicon)},
                               {"systems", {file.filename().string()}}};
    OpenOut(dir / (system.name() + ".json")) << manifest.dump(2) << '\n';
    std::printf("wrote %s\n", file.string().c_str());
    return 0;
  }

  if (*gen_hood) {
    const NumeralSystem base = LoadSystem(hood_base);
    const Neighbourhood hood = BuildNeighbourhood(base, gen_seed, hood_random);
    const fs::path dir = gen_out;
    nlohmann::json variants = nlohmann::json::array();
    for (const auto& v : hood.variants) {
      NumeralSystem system = v.system;
      system.set_name(base.name() + "~" + v.label);
      const fs::path file = dir / (system.name() + ".txt");
      auto out = OpenOut(file);
      WriteSystem(out, system);
      variants.push_back({{"label", v.label},
                          {"file", file.filename().string()},
                          {"irregularity_bits",
                           Irregularity(system, kMinNumber, kMaxNumber).bits}});
    }
    nlohmann::json alternatives = nlohmann::json::object();
    for (int n = kMinNumber; n <= kMaxNumber; ++n) {
      const auto choices = hood.Choices(n);
      if (choices.size() < 2) continue;
      std::vector<std::string> forms;
      for (const auto& c : choices) forms.push_back(Render(c));
      alternatives[std::to_string(n)] = forms;
    }
    nlohmann::json manifest = {{"kind", "neighbourhood"},
                               {"base", base.name()},
                               {"seed", gen_seed},
                               {"lexicon", LexiconJson(hood.lexicon)},
                               {"neighbourhood_size", hood.size()},
                               {"varying_numbers", hood.varying_numbers()},
                               {"alternatives", alternatives},
                               {"variants", variants}};
    OpenOut(dir / (base.name() + "_neighbourhood.json")) << manifest.dump(2) << '\n';
    std::printf("wrote %zu systems to %s\n", hood.variants.size(), dir.string().c_str());
    return 0;
  }

  if (*train) {
    const NumeralSystem system = LoadSystem(train_system);
    EvalProtocol protocol;
    protocol.test = NeedDistribution::FromName(test_dist);
    protocol.eval_interval = train_eval;
    const RunResult run = RunRepetition(system, NeedDistribution::FromName(train_dist),
                                        protocol, train_config, train_seed, 0);
    if (!run.ok()) {
      std::fprintf(stderr, "run aborted: %s\n", run.error.c_str());
      return kExitAbort;
    }
    if (!train_out.empty()) {
      auto out = OpenOut(train_out);
      WriteTraceCsv(out, run.trace);
    }
    std::printf("%s: auc=%.4f final_accuracy=%.4f\n", system.name().c_str(),
                run.auc, run.trace.back().accuracy);
    return 0;
  }

  if (*exp1) return RunSweepCommand(exp1_flags, 1);
  if (*exp2) return RunSweepCommand(exp2_flags, 2);
  if (*exp3) return RunExp3Command(exp3_flags);

  if (*regress) {
    const auto [x, y] = ReadColumns(regress_in, regress_x, regress_y);
    const RegressionFit fit = FitOls(x, y, 3);
    std::printf("slope=%s intercept=%s stderr_slope=%s n_points=%d\n",
                FormatDouble(fit.slope).c_str(), FormatDouble(fit.intercept).c_str(),
                FormatDouble(fit.stderr_slope).c_str(), fit.n_points);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Dispatch(argc, argv);
  } catch (const TrainingAborted& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitAbort;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
