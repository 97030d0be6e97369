#ifndef NUMLEARN_DFA_H_
#define NUMLEARN_DFA_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "numlearn/numeral.h"
#include "numlearn/system.h"

namespace numlearn {

// Partial deterministic automaton over Symbols. Missing transitions reject;
// no dead state is ever stored.
class Dfa {
 public:
  using StateId = int;
  struct Edge {
    Symbol symbol;
    StateId target;
  };

  StateId AddState(bool accepting);
  // Throws std::invalid_argument if (from, symbol) already has a transition.
  void AddTransition(StateId from, Symbol symbol, StateId to);
  void set_initial(StateId s) { initial_ = s; }

  int state_count() const { return static_cast<int>(accepting_.size()); }
  int transition_count() const;
  StateId initial() const { return initial_; }
  bool accepting(StateId s) const { return accepting_[s]; }
  // Sorted by symbol.
  std::span<const Edge> edges(StateId s) const { return edges_[s]; }

  std::optional<StateId> Next(StateId s, Symbol symbol) const;
  bool Accepts(std::span<const Symbol> word) const;
  // Symbols that label at least one transition.
  std::set<Symbol> Alphabet() const;

  bool IsAcyclic() const;
  // Every state is reachable from the initial state and reaches acceptance.
  bool IsTrim() const;

  // All accepted words, sorted. Requires an acyclic automaton.
  std::vector<std::vector<Symbol>> Language() const;

 private:
  StateId initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<std::vector<Edge>> edges_;
};

// Prefix-tree acceptor for the given words. Throws std::invalid_argument on
// an empty input.
Dfa BuildTrie(std::span<const Numeral> words);

// Minimal partial DFA with the same language, built by merging states with
// equal right languages bottom-up. Unreachable and non-co-reachable states
// are dropped first. States of the result are numbered breadth-first from
// the initial state (0), so equal languages give identical automata.
// Throws std::invalid_argument on a cyclic input.
Dfa Minimize(const Dfa& dfa);

struct IrregularityScore {
  double bits = 0.0;
  int state_count = 0;
  int transition_count = 0;
  int alphabet_size = 0;
};

// |Z|(2 log2|S| + log2|Sigma|) + log2|S| + |S| with real-valued logs.
IrregularityScore EncodingCost(int transition_count, int state_count,
                               int alphabet_size);
// Sigma is the set of symbols labelling the automaton's transitions.
IrregularityScore EncodingCost(const Dfa& dfa);

// Cost of the minimal DFA generating exactly `words`.
IrregularityScore Irregularity(std::span<const Numeral> words);
// Same over the numerals for lo..hi inclusive.
IrregularityScore Irregularity(const NumeralSystem& system, int lo, int hi);

// Mean irregularity over every window of `window` consecutive numbers in
// 1..99. Throws std::invalid_argument unless 1 <= window <= 99.
double LocalIrregularity(const NumeralSystem& system, int window = 10);

}  // namespace numlearn

#endif  // NUMLEARN_DFA_H_
