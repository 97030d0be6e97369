// Acceptance gate: one PASS/FAIL line per criterion. Criteria 8-11 train
// the full desk-scale populations and take several minutes on one core.
//
//   acceptance [--out DIR] [--only N,N,...]

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "numlearn/agent.h"
#include "numlearn/dfa.h"
#include "numlearn/experiments.h"
#include "numlearn/generators.h"
#include "numlearn/need.h"
#include "numlearn/trainer.h"
#include "oracles.h"

using namespace numlearn;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1-7: cheap checks; each returns a fingerprint for criterion 11 ----

Verdict MdlAnchors() {
  const NumeralSystem m = BuiltinSystem("mandarin");
  const double a = Irregularity(m, 1, 10).bits;
  const double b = Irregularity(m, 1, 20).bits;
  const double c = Irregularity(m, 1, 30).bits;
  const bool ok = std::abs(a - 56.219) <= 0.01 && std::abs(b - 201.192) <= 0.01 &&
                  std::abs(c - 241.039) <= 0.01;
  return {ok, Fmt("1..10=%.3f 1..20=%.3f 1..30=%.3f", a, b, c)};
}

Verdict UnitIdentity() {
  const double a = EncodingCost(10, 2, 10).bits;
  const double b = EncodingCost(1, 1, 1).bits;
  return {std::abs(a - 56.219) <= 0.001 && b == 1.0,
          Fmt("(10,2,10)=%.4f (1,1,1)=%.17g", a, b)};
}

Verdict DfaProperties(std::string* fingerprint) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> count(1, 99), terms(1, 4), atom(1, 4), op(0, 2);
  int preserved = 0, distinct = 0, idempotent = 0;
  std::ostringstream fp;
  for (int trial = 0; trial < 100; ++trial) {
    std::set<Numeral> words;
    const int want = count(rng);
    for (int i = 0; i < want; ++i) {
      std::vector<Symbol> s{Symbol::Atom(atom(rng))};
      const int k = terms(rng);
      for (int t = 1; t < k; ++t) {
        const int o = op(rng);
        s.push_back(o == 0 ? Symbol::Plus() : o == 1 ? Symbol::Times() : Symbol::Minus());
        s.push_back(Symbol::Atom(atom(rng)));
      }
      words.insert(Numeral(s));
    }
    const std::vector<Numeral> list(words.begin(), words.end());
    const Dfa dfa = Minimize(BuildTrie(list));
    std::set<oracle::Word> language;
    for (const auto& w : list) language.emplace(w.symbols().begin(), w.symbols().end());
    const auto accepted = dfa.Language();
    if (accepted.size() == language.size() &&
        std::set<oracle::Word>(accepted.begin(), accepted.end()) == language) {
      ++preserved;
    }
    const auto right = oracle::RightLanguages(dfa);
    if (std::set<std::set<oracle::Word>>(right.begin(), right.end()).size() == right.size()) {
      ++distinct;
    }
    const Dfa again = Minimize(dfa);
    if (again.state_count() == dfa.state_count() &&
        again.transition_count() == dfa.transition_count()) {
      ++idempotent;
    }
    fp << dfa.state_count() << ':' << dfa.transition_count() << ' ';
  }
  *fingerprint = fp.str();
  return {preserved == 100 && distinct == 100 && idempotent == 100,
          Fmt("language preserved %d/100, pairwise-distinct states %d/100, "
              "idempotent %d/100", preserved, distinct, idempotent)};
}

Verdict RewardValues() {
  const double a = Reward(23, 23, 0.5), b = Reward(25, 23, 0.5),
               c = Reward(150, 50, 0.5), d = Reward(0.4, 1, 0.5);
  const bool ok = a == 1.0 && std::abs(b - std::exp(-1.0)) <= 1e-12 && c == 0.0 &&
                  d == 0.0;
  return {ok, Fmt("R(23,23)=%g R(25,23)=%.15f R(150,50)=%g R(0.4,1)=%g", a, b, c, d)};
}

Verdict PowerLawSampler(std::string* fingerprint) {
  auto sampler = NeedDistribution::PowerLaw().MakeSampler();
  std::mt19937_64 rng(12345);
  const int draws = 1'000'000;
  long long upto2 = 0, upto6 = 0, sum = 0;
  for (int i = 0; i < draws; ++i) {
    const int n = NeedDistribution::Draw(sampler, rng);
    upto2 += n <= 2;
    upto6 += n <= 6;
    sum += n;
  }
  const double m2 = double(upto2) / draws, m6 = double(upto6) / draws;
  *fingerprint = Fmt("%lld %lld %lld", upto2, upto6, sum);
  return {std::abs(m2 - 0.7645) <= 0.01 && std::abs(m6 - 0.9122) <= 0.01,
          Fmt("mass{1,2}=%.4f mass{1..6}=%.4f", m2, m6)};
}

Verdict GradientCheck(std::string* fingerprint) {
  const std::vector<Numeral> words{Tokenize("2*10+3"), Tokenize("7")};
  std::vector<Symbol> alphabet;
  for (const auto& w : words) alphabet.insert(alphabet.end(), w.symbols().begin(), w.symbols().end());
  std::mt19937_64 rng(2);
  AgentParams params = AgentParams::Initialize(alphabet, rng);
  params.block(ParamBlock::kHeadBias)[0] = -0.2;
  const auto t0 = params.Encode(words[0]), t1 = params.Encode(words[1]);
  const std::vector<Example> batch{{t0, 23}, {t1, 7}};
  const std::vector<double> actions{ForwardTokens(params, t0) + 0.03,
                                    ForwardTokens(params, t1) - 0.02};
  const std::vector<double> advantages{0.6, -0.25};
  double worst = 0.0;
  int checked = 0;
  std::ostringstream fp;
  for (ParamBlock block : kAllParamBlocks) {
    const auto r = oracle::CheckBlock(params, batch, actions, advantages, 0.1, block);
    worst = std::max(worst, r.max_rel_error);
    checked += r.checked;
    fp << FormatDouble(r.max_rel_error) << ' ';
  }
  std::vector<double> grad(params.values().size());
  SurrogateLossAndGradient(params, batch, actions, advantages, 0.1, grad);
  for (double g : grad) fp << FormatDouble(g) << ' ';
  *fingerprint = fp.str();
  return {worst <= 1e-4,
          Fmt("%d coordinates over 6 blocks, max relative error %.2e", checked, worst)};
}

Verdict Alternatives91(std::string* fingerprint) {
  const LexiconSpec basque{{1, 2, 3, 4, 5, 6, 7, 8, 9},
                           {10, 20},
                           {SymbolKind::kPlus, SymbolKind::kTimes}};
  const auto found = EnumerateAlternatives(91, 7, basque);
  std::set<std::string> got;
  std::string list;
  for (const auto& n : found) {
    got.insert(Render(n));
    list += Render(n) + " ";
  }
  const std::set<std::string> want{"4*20+10+1", "10+4*20+1", "20+7*10+1",
                                   "7*10+20+1", "8*10+10+1", "10+8*10+1"};
  *fingerprint = list;
  return {got == want && found.size() == 6, list};
}

// ---- 8-10: desk-scale experiments ----

struct Experiments {
  SweepResult exp1, exp2;
  Exp3Result exp3;
};

Experiments RunAll(const ExperimentConfig& config, const fs::path& dir) {
  Experiments e;
  e.exp2 = RunExp2(config);
  WriteSweep(dir / "exp2", e.exp2);
  e.exp1 = RunExp1(config);
  WriteSweep(dir / "exp1", e.exp1);
  e.exp3 = RunExp3(config);
  WriteExp3(dir / "exp3", e.exp3);
  return e;
}

const NamedFit* Find(const SweepResult& r, const std::string& name) {
  for (const auto& f : r.fits) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

Verdict Exp2Ordering(const SweepResult& r) {
  double regular = 0, random = 0;
  int nr = 0, nb = 0;
  for (const auto& row : r.rows) {
    if (row.group == "regular") {
      regular += row.learnability;
      ++nr;
    } else if (row.group == "random") {
      random += row.learnability;
      ++nb;
    }
  }
  regular /= std::max(nr, 1);
  random /= std::max(nb, 1);
  const NamedFit* global = Find(r, "global");
  const bool have = global != nullptr && global->fit.has_value();
  const double slope = have ? global->fit->slope : NAN;
  return {nr == 3 && nb == 10 && regular > random && have && slope < 0,
          Fmt("mean learnability regular=%.4f (n=%d) random=%.4f (n=%d), "
              "global slope=%.4g", regular, nr, random, nb, slope)};
}

Verdict Exp1VsExp2(const SweepResult& e1, const SweepResult& e2) {
  const NamedFit* a = Find(e1, "global");
  const NamedFit* b = Find(e2, "global");
  if (a == nullptr || b == nullptr || !a->fit || !b->fit) return {false, "missing fit"};
  return {std::abs(a->fit->slope) < std::abs(b->fit->slope),
          Fmt("|slope| exp1=%.4g exp2=%.4g", std::abs(a->fit->slope),
              std::abs(b->fit->slope))};
}

Verdict Exp3Trend(const Exp3Result& r) {
  const auto& s = r.summary;
  std::string per;
  for (const auto& n : r.neighbourhoods) {
    per += n.base + "=" + (n.fit ? Fmt("%.3g", n.fit->slope) : n.status) + " ";
  }
  return {s.fitted >= 3 && 2 * s.most_ge_least > s.fitted && s.mean_slope < 0,
          Fmt("fitted %d, most>=least in %d, negative slopes %d, mean slope %.4g; ",
              s.fitted, s.most_ge_least, s.negative_slopes, s.mean_slope) + per};
}

bool SameAggregates(const Experiments& a, const Experiments& b) {
  auto rows_equal = [](const SweepResult& x, const SweepResult& y) {
    if (x.rows.size() != y.rows.size()) return false;
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
      if (x.rows[i].learnability != y.rows[i].learnability ||
          x.rows[i].auc_stddev != y.rows[i].auc_stddev) {
        return false;
      }
    }
    return true;
  };
  if (!rows_equal(a.exp1, b.exp1) || !rows_equal(a.exp2, b.exp2)) return false;
  if (a.exp3.neighbourhoods.size() != b.exp3.neighbourhoods.size()) return false;
  for (std::size_t i = 0; i < a.exp3.neighbourhoods.size(); ++i) {
    const auto& x = a.exp3.neighbourhoods[i].variants;
    const auto& y = b.exp3.neighbourhoods[i].variants;
    if (x.size() != y.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j].learnability != y[j].learnability) return false;
    }
  }
  return a.exp3.summary.mean_slope == b.exp3.summary.mean_slope;
}

int CompareTrees(const fs::path& a, const fs::path& b, int* files) {
  int differing = 0;
  *files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    ++*files;
    const fs::path other = b / fs::relative(entry.path(), a);
    if (!fs::exists(other) || Slurp(entry.path()) != Slurp(other)) ++differing;
  }
  return differing;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = "acceptance_out";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: acceptance [--out DIR] [--only N,N,...]\n");
      return 2;
    }
  }
  auto wanted = [&](int c) { return only.empty() || only.contains(c); };

  int failures = 0;
  auto report = [&](int id, const Verdict& v) {
    std::printf("criterion %2d: %s  %s\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  };

  std::string fp3, fp5, fp6, fp7;
  if (wanted(1)) report(1, MdlAnchors());
  if (wanted(2)) report(2, UnitIdentity());
  if (wanted(3) || wanted(11)) {
    const Verdict v = DfaProperties(&fp3);
    if (wanted(3)) report(3, v);
  }
  if (wanted(4)) report(4, RewardValues());
  if (wanted(5) || wanted(11)) {
    const Verdict v = PowerLawSampler(&fp5);
    if (wanted(5)) report(5, v);
  }
  if (wanted(6) || wanted(11)) {
    const Verdict v = GradientCheck(&fp6);
    if (wanted(6)) report(6, v);
  }
  if (wanted(7) || wanted(11)) {
    const Verdict v = Alternatives91(&fp7);
    if (wanted(7)) report(7, v);
  }

  const bool heavy = wanted(8) || wanted(9) || wanted(10) || wanted(11);
  if (!heavy) return failures == 0 ? 0 : 1;

  ExperimentConfig config = ProfileConfig("desk");
  config.master_seed = 1;
  config.parallel = 1;
  const auto t0 = std::chrono::steady_clock::now();
  fs::remove_all(out);
  const Experiments first = RunAll(config, out / "run_a");
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60;
  if (wanted(8)) report(8, Exp2Ordering(first.exp2));
  if (wanted(9)) report(9, Exp1VsExp2(first.exp1, first.exp2));
  if (wanted(10)) report(10, Exp3Trend(first.exp3));
  std::printf("              (experiments 1-3 at desk scale: %.1f min)\n", minutes);

  if (wanted(11)) {
    const Experiments second = RunAll(config, out / "run_b");
    std::string g3, g5, g6, g7;
    DfaProperties(&g3);
    PowerLawSampler(&g5);
    GradientCheck(&g6);
    Alternatives91(&g7);
    const bool cheap_same = g3 == fp3 && g5 == fp5 && g6 == fp6 && g7 == fp7;
    int files = 0;
    const int differing = CompareTrees(out / "run_a", out / "run_b", &files);

    ExperimentConfig wide = config;
    wide.parallel = 8;
    const Experiments third = RunAll(wide, out / "run_c");
    const bool aggregates = SameAggregates(first, third);
    report(11, {cheap_same && differing == 0 && files > 0 && aggregates && SameAggregates(first, second),
                Fmt("criteria 3/5/6/7 %s; %d/%d CSV files byte-identical at "
                    "parallelism 1; aggregates at parallelism 8 %s",
                    cheap_same ? "repeat exactly" : "DIFFER", files - differing,
                    files, aggregates ? "identical" : "DIFFER")});
  }
  return failures == 0 ? 0 : 1;
}
