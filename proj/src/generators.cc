#include "numlearn/generators.h"

#include <algorithm>
#include <random>
#include <utility>

#include "numlearn/dfa.h"

namespace numlearn {

std::set<int> LexiconSpec::atoms() const {
  std::set<int> out = digits;
  out.insert(multipliers.begin(), multipliers.end());
  return out;
}

namespace {

// A numeral split into additive terms; each term is a run of atoms joined
// by '*'.
struct Term {
  SymbolKind sign = SymbolKind::kPlus;
  std::vector<int> factors;
};

std::vector<Term> SplitTerms(const Numeral& numeral) {
  std::vector<Term> terms(1);
  terms[0].factors.push_back(numeral[0].value);
  for (int i = 1; i < numeral.length(); i += 2) {
    const Symbol& op = numeral[i];
    const int v = numeral[i + 1].value;
    if (op.kind == SymbolKind::kTimes) {
      terms.back().factors.push_back(v);
    } else {
      terms.push_back(Term{op.kind, {v}});
    }
  }
  return terms;
}

}  // namespace

LexiconSpec InferLexicon(const NumeralSystem& system) {
  LexiconSpec lex;
  std::set<int> loose;
  for (const auto& [n, numeral] : system.numerals()) {
    for (const Symbol& s : numeral.symbols()) {
      if (s.is_combinator()) lex.combinators.insert(s.kind);
    }
    const auto terms = SplitTerms(numeral);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto& f = terms[t].factors;
      if (f.size() > 1) {
        lex.digits.insert(f.begin(), f.end() - 1);
        lex.multipliers.insert(f.back());
      } else if (t + 1 < terms.size()) {
        lex.multipliers.insert(f[0]);
      } else {
        loose.insert(f[0]);
      }
    }
  }
  for (int v : loose) {
    if (!lex.multipliers.contains(v)) lex.digits.insert(v);
  }
  return lex;
}

namespace {

class AlternativeEnumerator {
 public:
  AlternativeEnumerator(int target, int atom_budget, const LexiconSpec& lex)
      : target_(target), lex_(lex) {
    for (SymbolKind k : {SymbolKind::kPlus, SymbolKind::kMinus}) {
      if (lex.combinators.contains(k)) joins_.push_back(k);
    }
    allow_times_ = lex.combinators.contains(SymbolKind::kTimes);
    monotone_ = !lex.combinators.contains(SymbolKind::kMinus);
    const auto atoms = lex.atoms();
    atoms_.assign(atoms.begin(), atoms.end());
    Extend(atom_budget, 0, SymbolKind::kPlus);
  }

  std::vector<Numeral> Take() && {
    std::sort(found_.begin(), found_.end());
    found_.erase(std::unique(found_.begin(), found_.end()), found_.end());
    return std::move(found_);
  }

 private:
  void Emit() { found_.emplace_back(current_); }

  void PlaceTerm(int remaining, std::int64_t value, SymbolKind sign,
                 std::int64_t term_value, std::initializer_list<Symbol> syms) {
    const std::size_t mark = current_.size();
    if (mark > 0) current_.push_back(Symbol{sign, 0});
    current_.insert(current_.end(), syms.begin(), syms.end());
    const std::int64_t next =
        value + (sign == SymbolKind::kMinus ? -term_value : term_value);
    if (remaining == 0) {
      if (next == target_) Emit();
    } else if (!(monotone_ && next >= target_)) {
      for (SymbolKind join : joins_) Extend(remaining, next, join);
    }
    current_.resize(mark);
  }

  // Appends one more term (preceded by `sign` unless it is the first).
  void Extend(int remaining, std::int64_t value, SymbolKind sign) {
    for (int a : atoms_) {
      // Bare atoms: any atom as the last term, otherwise multipliers only.
      if (remaining - 1 == 0 || lex_.multipliers.contains(a)) {
        PlaceTerm(remaining - 1, value, sign, a, {Symbol::Atom(a)});
      }
    }
    if (!allow_times_ || remaining < 2) return;
    for (int d : lex_.digits) {
      for (int m : lex_.multipliers) {
        PlaceTerm(remaining - 2, value, sign,
                  static_cast<std::int64_t>(d) * m,
                  {Symbol::Atom(d), Symbol::Times(), Symbol::Atom(m)});
      }
    }
  }

  int target_;
  const LexiconSpec& lex_;
  std::vector<int> atoms_;
  std::vector<SymbolKind> joins_;
  bool allow_times_ = false;
  bool monotone_ = true;
  std::vector<Symbol> current_;
  std::vector<Numeral> found_;
};

}  // namespace

std::vector<Numeral> EnumerateAlternatives(int n, int length,
                                           const LexiconSpec& lexicon) {
  if (length < 1 || length % 2 == 0) {
    throw std::invalid_argument("EnumerateAlternatives: length must be odd "
                                "and >= 1");
  }
  return AlternativeEnumerator(n, (length + 1) / 2, lexicon).Take();
}

std::optional<Numeral> CanonicalNumeral(int n, const LexiconSpec& lexicon) {
  if (n < 1) return std::nullopt;
  const bool has_plus = lexicon.combinators.contains(SymbolKind::kPlus);
  const bool has_times = lexicon.combinators.contains(SymbolKind::kTimes);
  std::vector<Symbol> out;
  int rest = n;
  while (rest > 0) {
    if (!out.empty()) {
      if (!has_plus) return std::nullopt;
      out.push_back(Symbol::Plus());
    }
    if (lexicon.IsAtom(rest)) {
      out.push_back(Symbol::Atom(rest));
      break;
    }
    bool placed = false;
    for (auto it = lexicon.multipliers.rbegin();
         it != lexicon.multipliers.rend(); ++it) {
      const int m = *it;
      if (m > rest) continue;
      const int q = rest / m;
      if (q == 1) {
        out.push_back(Symbol::Atom(m));
      } else if (has_times && lexicon.digits.contains(q)) {
        out.insert(out.end(), {Symbol::Atom(q), Symbol::Times(), Symbol::Atom(m)});
      } else {
        continue;
      }
      rest -= q * m;
      placed = true;
      break;
    }
    if (!placed) return std::nullopt;
  }
  return Numeral(std::move(out));
}

NumeralSystem GenerateRandomSystem(const LexiconSpec& lexicon,
                                   std::uint64_t seed, std::string name) {
  if (name.empty()) name = "random_" + std::to_string(seed);
  NumeralSystem system(std::move(name), SystemSource::kGenerated);
  std::mt19937_64 rng(seed);
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    const auto canonical = CanonicalNumeral(n, lexicon);
    if (!canonical) {
      throw GenerationError(n, "lexicon cannot express " + std::to_string(n));
    }
    std::vector<Numeral> pool;
    for (int len = 1; len <= canonical->length(); len += 2) {
      auto found = EnumerateAlternatives(n, len, lexicon);
      pool.insert(pool.end(), std::make_move_iterator(found.begin()),
                  std::make_move_iterator(found.end()));
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    system.Set(n, std::move(pool[pick(rng)]));
  }
  return system;
}

LexiconSpec RandomLexicon(std::uint64_t seed) {
  static constexpr int kMultiplierPool[] = {5, 6, 8, 9, 10, 12, 15, 20};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> digit_count(3, 9);
  std::uniform_int_distribution<int> multiplier_count(2, 3);
  for (;;) {
    LexiconSpec lex;
    lex.combinators = {SymbolKind::kPlus, SymbolKind::kTimes};
    const int d = digit_count(rng);
    for (int v = 1; v <= d; ++v) lex.digits.insert(v);
    std::vector<int> pool(std::begin(kMultiplierPool), std::end(kMultiplierPool));
    std::shuffle(pool.begin(), pool.end(), rng);
    const int k = multiplier_count(rng);
    lex.multipliers.insert(pool.begin(), pool.begin() + k);
    const int atoms = lex.atom_count();
    if (atoms < 5 || atoms > 13) continue;
    bool ok = true;
    for (int n = kMinNumber; n <= kMaxNumber && ok; ++n) {
      ok = CanonicalNumeral(n, lex).has_value();
    }
    if (ok) return lex;
  }
}

std::vector<Numeral> Neighbourhood::Choices(int n) const {
  std::vector<Numeral> out;
  if (auto it = alternatives.find(n); it != alternatives.end()) out = it->second;
  const Numeral& own = base.at(n);
  if (std::find(out.begin(), out.end(), own) == out.end()) {
    out.push_back(own);
    std::sort(out.begin(), out.end());
  }
  return out;
}

double Neighbourhood::size() const {
  double total = 1.0;
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    total *= static_cast<double>(Choices(n).size());
  }
  return total;
}

int Neighbourhood::varying_numbers() const {
  int count = 0;
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    count += Choices(n).size() > 1 ? 1 : 0;
  }
  return count;
}

namespace {

std::set<Symbol> SymbolsOf(const Numeral& numeral) {
  return {numeral.symbols().begin(), numeral.symbols().end()};
}

bool Covers(const std::set<Symbol>& have, const std::set<Symbol>& need) {
  return std::includes(have.begin(), have.end(), need.begin(), need.end());
}

}  // namespace

NumeralSystem GreedyExtreme(const Neighbourhood& neighbourhood,
                            GreedyDirection direction) {
  const NumeralSystem& base = neighbourhood.base;
  std::set<Symbol> required;
  for (const auto& [n, numeral] : base.numerals()) {
    const auto syms = SymbolsOf(numeral);
    required.insert(syms.begin(), syms.end());
  }
  // later_symbols[n] = every symbol offered by some choice for m > n.
  std::vector<std::vector<Numeral>> choices(kMaxNumber + 2);
  std::vector<std::set<Symbol>> later_symbols(kMaxNumber + 2);
  for (int n = kMaxNumber; n >= kMinNumber; --n) {
    choices[n] = neighbourhood.Choices(n);
    later_symbols[n] = later_symbols[n + 1];
    for (const Numeral& c : choices[n + 1]) {
      const auto syms = SymbolsOf(c);
      later_symbols[n].insert(syms.begin(), syms.end());
    }
  }

  const std::string label = direction == GreedyDirection::kMostRegular
                                ? "most_regular"
                                : "least_regular";
  NumeralSystem out(base.name() + "~" + label, SystemSource::kGenerated);
  std::vector<Numeral> chosen;
  std::set<Symbol> used;
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    std::vector<const Numeral*> admissible;
    for (const Numeral& c : choices[n]) {
      std::set<Symbol> reach = used;
      const auto syms = SymbolsOf(c);
      reach.insert(syms.begin(), syms.end());
      reach.insert(later_symbols[n].begin(), later_symbols[n].end());
      if (Covers(reach, required)) admissible.push_back(&c);
    }
    if (admissible.empty()) {
      for (const Numeral& c : choices[n]) admissible.push_back(&c);
    }
    const Numeral* best = nullptr;
    double best_bits = 0.0;
    for (const Numeral* c : admissible) {
      chosen.push_back(*c);
      const double bits = Irregularity(chosen).bits;
      chosen.pop_back();
      const bool better =
          best == nullptr ||
          (direction == GreedyDirection::kMostRegular ? bits < best_bits
                                                      : bits > best_bits);
      if (better) {
        best = c;
        best_bits = bits;
      }
    }
    chosen.push_back(*best);
    const auto syms = SymbolsOf(*best);
    used.insert(syms.begin(), syms.end());
    out.Set(n, *best);
  }
  return out;
}

Neighbourhood BuildNeighbourhood(const NumeralSystem& base, std::uint64_t seed,
                                 int random_variants) {
  Neighbourhood nb;
  nb.base = base;
  nb.lexicon = InferLexicon(base);
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    nb.alternatives[n] =
        EnumerateAlternatives(n, base.at(n).length(), nb.lexicon);
  }
  nb.variants.push_back({"base", base});
  nb.variants.push_back(
      {"most_regular", GreedyExtreme(nb, GreedyDirection::kMostRegular)});
  nb.variants.push_back(
      {"least_regular", GreedyExtreme(nb, GreedyDirection::kLeastRegular)});

  const SystemStats base_stats = ComputeStats(base);
  std::mt19937_64 rng(seed);
  constexpr int kAttemptsPerVariant = 200;
  for (int k = 0; k < random_variants; ++k) {
    for (int attempt = 0; attempt < kAttemptsPerVariant; ++attempt) {
      NumeralSystem candidate(
          base.name() + "~random_" + std::to_string(k),
          SystemSource::kGenerated);
      for (int n = kMinNumber; n <= kMaxNumber; ++n) {
        auto options = nb.Choices(n);
        std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
        candidate.Set(n, std::move(options[pick(rng)]));
      }
      if (!(ComputeStats(candidate) == base_stats)) continue;
      const bool duplicate = std::any_of(
          nb.variants.begin(), nb.variants.end(),
          [&](const LabeledSystem& v) { return v.system == candidate; });
      if (duplicate) continue;
      nb.variants.push_back({"random_" + std::to_string(k), std::move(candidate)});
      break;
    }
  }
  return nb;
}

}  // namespace numlearn
