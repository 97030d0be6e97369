#ifndef NUMLEARN_GENERATORS_H_
#define NUMLEARN_GENERATORS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "numlearn/numeral.h"
#include "numlearn/system.h"

namespace numlearn {

// Morphemes available to a generated system. A value may be both a digit
// and a multiplier (e.g. 9 in a 9/10 alternating system).
struct LexiconSpec {
  std::set<int> digits;
  std::set<int> multipliers;
  std::set<SymbolKind> combinators;  // subset of {kPlus, kMinus, kTimes}

  std::set<int> atoms() const;
  int atom_count() const { return static_cast<int>(atoms().size()); }
  bool IsAtom(int v) const {
    return digits.contains(v) || multipliers.contains(v);
  }
};

// Reads digit/multiplier roles off a system's numerals: right operands of
// '*' and non-final bare terms are multipliers; left operands of '*' and
// any remaining atoms are digits.
LexiconSpec InferLexicon(const NumeralSystem& system);

// Every numeral of exactly `length` symbols over `lexicon` that evaluates
// to n, sorted. Numerals are sums/differences of terms; a term is a bare
// atom or digit*multiplier. Only the final term may be a bare digit; every
// other bare term must be a multiplier. Term order matters.
std::vector<Numeral> EnumerateAlternatives(int n, int length,
                                           const LexiconSpec& lexicon);

// Largest-multiplier-first decomposition (87 -> 8*10+7), or nullopt when
// the lexicon cannot express n that way.
std::optional<Numeral> CanonicalNumeral(int n, const LexiconSpec& lexicon);

class GenerationError : public std::runtime_error {
 public:
  GenerationError(int number, const std::string& what)
      : std::runtime_error(what), number_(number) {}
  int number() const { return number_; }

 private:
  int number_;
};

// Each n independently draws a uniform choice among every numeral of length
// at most that of its canonical numeral. Deterministic in `seed`.
NumeralSystem GenerateRandomSystem(const LexiconSpec& lexicon,
                                   std::uint64_t seed, std::string name = "");

// A lexicon with 3..9 digits and two or three multipliers from attested
// bases, 5..13 atoms, able to express 1..99 canonically.
LexiconSpec RandomLexicon(std::uint64_t seed);

struct LabeledSystem {
  std::string label;  // "base", "most_regular", "least_regular", "random_<k>"
  NumeralSystem system;
};

struct Neighbourhood {
  NumeralSystem base;
  LexiconSpec lexicon;
  // Same-length alternatives for every n (the base form may be absent if
  // the base uses a form outside the term grammar).
  std::map<int, std::vector<Numeral>> alternatives;
  std::vector<LabeledSystem> variants;

  // alternatives[n] plus the base form, sorted.
  std::vector<Numeral> Choices(int n) const;
  // Number of distinct systems the choices span (as a double: it can be
  // astronomically large).
  double size() const;
  int varying_numbers() const;
};

enum class GreedyDirection { kMostRegular, kLeastRegular };

// Walks n = 1..99, choosing at each step the option that minimizes
// (most regular) or maximizes (least regular) the DFA cost of the numerals
// chosen so far; ties go to the lexicographically smallest numeral. Options
// that would make it impossible to keep every base symbol in use are
// skipped while an alternative exists.
NumeralSystem GreedyExtreme(const Neighbourhood& neighbourhood,
                            GreedyDirection direction);

// Alternatives for every n plus variants: the base, both greedy extremes and
// `random_variants` uniform combinations with the base's lexicon statistics.
Neighbourhood BuildNeighbourhood(const NumeralSystem& base, std::uint64_t seed,
                                 int random_variants = 0);

}  // namespace numlearn

#endif  // NUMLEARN_GENERATORS_H_
