#include "numlearn/dfa.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace numlearn {

Dfa::StateId Dfa::AddState(bool accepting) {
  accepting_.push_back(accepting);
  edges_.emplace_back();
  return state_count() - 1;
}

void Dfa::AddTransition(StateId from, Symbol symbol, StateId to) {
  auto& out = edges_.at(from);
  auto it = std::lower_bound(
      out.begin(), out.end(), symbol,
      [](const Edge& e, const Symbol& s) { return e.symbol < s; });
  if (it != out.end() && it->symbol == symbol) {
    throw std::invalid_argument("state " + std::to_string(from) +
                                " already has a transition on " +
                                symbol.ToString());
  }
  out.insert(it, Edge{symbol, to});
}

int Dfa::transition_count() const {
  std::size_t total = 0;
  for (const auto& out : edges_) total += out.size();
  return static_cast<int>(total);
}

std::optional<Dfa::StateId> Dfa::Next(StateId s, Symbol symbol) const {
  const auto& out = edges_[s];
  auto it = std::lower_bound(
      out.begin(), out.end(), symbol,
      [](const Edge& e, const Symbol& sym) { return e.symbol < sym; });
  if (it == out.end() || it->symbol != symbol) return std::nullopt;
  return it->target;
}

bool Dfa::Accepts(std::span<const Symbol> word) const {
  if (state_count() == 0) return false;
  StateId s = initial_;
  for (const Symbol& sym : word) {
    auto next = Next(s, sym);
    if (!next) return false;
    s = *next;
  }
  return accepting_[s];
}

std::set<Symbol> Dfa::Alphabet() const {
  std::set<Symbol> out;
  for (const auto& edges : edges_) {
    for (const Edge& e : edges) out.insert(e.symbol);
  }
  return out;
}

bool Dfa::IsAcyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<int> mark(state_count(), 0);
  for (StateId root = 0; root < state_count(); ++root) {
    if (mark[root] != 0) continue;
    std::vector<std::pair<StateId, std::size_t>> stack{{root, 0}};
    mark[root] = 1;
    while (!stack.empty()) {
      auto& [s, next_edge] = stack.back();
      if (next_edge == edges_[s].size()) {
        mark[s] = 2;
        stack.pop_back();
        continue;
      }
      const StateId t = edges_[s][next_edge++].target;
      if (mark[t] == 1) return false;
      if (mark[t] == 0) {
        mark[t] = 1;
        stack.emplace_back(t, 0);
      }
    }
  }
  return true;
}

namespace {

std::vector<bool> Reachable(const Dfa& dfa) {
  std::vector<bool> seen(dfa.state_count(), false);
  if (dfa.state_count() == 0) return seen;
  std::vector<Dfa::StateId> stack{dfa.initial()};
  seen[dfa.initial()] = true;
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    for (const auto& e : dfa.edges(s)) {
      if (!seen[e.target]) {
        seen[e.target] = true;
        stack.push_back(e.target);
      }
    }
  }
  return seen;
}

std::vector<bool> CoReachable(const Dfa& dfa) {
  const int n = dfa.state_count();
  std::vector<std::vector<Dfa::StateId>> reverse(n);
  for (Dfa::StateId s = 0; s < n; ++s) {
    for (const auto& e : dfa.edges(s)) reverse[e.target].push_back(s);
  }
  std::vector<bool> live(n, false);
  std::vector<Dfa::StateId> stack;
  for (Dfa::StateId s = 0; s < n; ++s) {
    if (dfa.accepting(s)) {
      live[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    for (auto p : reverse[s]) {
      if (!live[p]) {
        live[p] = true;
        stack.push_back(p);
      }
    }
  }
  return live;
}

}  // namespace

bool Dfa::IsTrim() const {
  const auto reach = Reachable(*this);
  const auto live = CoReachable(*this);
  for (StateId s = 0; s < state_count(); ++s) {
    if (!reach[s] || !live[s]) return false;
  }
  return true;
}

std::vector<std::vector<Symbol>> Dfa::Language() const {
  if (!IsAcyclic()) {
    throw std::invalid_argument("Language() requires an acyclic automaton");
  }
  std::vector<std::vector<Symbol>> words;
  if (state_count() == 0) return words;
  std::vector<Symbol> prefix;
  std::function<void(StateId)> walk = [&](StateId s) {
    if (accepting_[s]) words.push_back(prefix);
    for (const Edge& e : edges_[s]) {
      prefix.push_back(e.symbol);
      walk(e.target);
      prefix.pop_back();
    }
  };
  walk(initial_);
  std::sort(words.begin(), words.end());
  return words;
}

Dfa BuildTrie(std::span<const Numeral> words) {
  if (words.empty()) throw std::invalid_argument("BuildTrie: no words");
  // Accepting flags are fixed at creation, so collect the tree first.
  std::vector<bool> accept{false};
  std::vector<std::map<Symbol, Dfa::StateId>> children(1);
  for (const Numeral& word : words) {
    Dfa::StateId s = 0;
    for (const Symbol& sym : word.symbols()) {
      auto it = children[s].find(sym);
      if (it == children[s].end()) {
        const auto t = static_cast<Dfa::StateId>(accept.size());
        accept.push_back(false);
        children.emplace_back();
        children[s].emplace(sym, t);
        s = t;
      } else {
        s = it->second;
      }
    }
    accept[s] = true;
  }
  Dfa out;
  for (std::size_t s = 0; s < accept.size(); ++s) out.AddState(accept[s]);
  out.set_initial(0);
  for (std::size_t s = 0; s < children.size(); ++s) {
    for (const auto& [sym, t] : children[s]) {
      out.AddTransition(static_cast<Dfa::StateId>(s), sym, t);
    }
  }
  return out;
}

Dfa Minimize(const Dfa& dfa) {
  if (!dfa.IsAcyclic()) {
    throw std::invalid_argument("Minimize: automaton must be acyclic");
  }
  const int n = dfa.state_count();
  Dfa out;
  if (n == 0) return out;
  const auto reach = Reachable(dfa);
  const auto live = CoReachable(dfa);
  if (!live[dfa.initial()]) {
    out.set_initial(out.AddState(false));
    return out;
  }
  auto keep = [&](Dfa::StateId s) { return reach[s] && live[s]; };

  // A state's class is determined by its accepting flag and its labelled
  // successor classes; in an acyclic automaton this is the right language.
  using Signature = std::pair<bool, std::vector<std::pair<Symbol, int>>>;
  std::map<Signature, int> registry;
  std::vector<int> cls(n, -1);
  std::vector<Signature> class_sig;
  std::vector<std::pair<Dfa::StateId, std::size_t>> stack{{dfa.initial(), 0}};
  while (!stack.empty()) {
    auto& [s, next_edge] = stack.back();
    const auto edges = dfa.edges(s);
    while (next_edge < edges.size()) {
      const auto t = edges[next_edge].target;
      if (keep(t) && cls[t] < 0) break;
      ++next_edge;
    }
    if (next_edge < edges.size()) {
      stack.emplace_back(edges[next_edge].target, 0);
      continue;
    }
    Signature sig{dfa.accepting(s), {}};
    for (const auto& e : edges) {
      if (keep(e.target)) sig.second.emplace_back(e.symbol, cls[e.target]);
    }
    auto [it, inserted] =
        registry.emplace(sig, static_cast<int>(class_sig.size()));
    if (inserted) class_sig.push_back(std::move(sig));
    cls[s] = it->second;
    stack.pop_back();
  }

  // Breadth-first renumbering from the initial class.
  std::vector<int> new_id(class_sig.size(), -1);
  std::deque<int> queue{cls[dfa.initial()]};
  std::vector<int> order;
  new_id[cls[dfa.initial()]] = 0;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    order.push_back(c);
    for (const auto& [sym, t] : class_sig[c].second) {
      if (new_id[t] < 0) {
        new_id[t] = static_cast<int>(order.size() + queue.size());
        queue.push_back(t);
      }
    }
  }
  for (int c : order) out.AddState(class_sig[c].first);
  out.set_initial(0);
  for (int c : order) {
    for (const auto& [sym, t] : class_sig[c].second) {
      out.AddTransition(new_id[c], sym, new_id[t]);
    }
  }
  return out;
}

IrregularityScore EncodingCost(int transition_count, int state_count,
                               int alphabet_size) {
  if (state_count < 1 || alphabet_size < 1 || transition_count < 0) {
    throw std::invalid_argument(
        "EncodingCost: need |S| >= 1, |Sigma| >= 1, |Z| >= 0");
  }
  const double log_s = std::log2(static_cast<double>(state_count));
  const double log_sigma = std::log2(static_cast<double>(alphabet_size));
  IrregularityScore score;
  score.bits = transition_count * (2.0 * log_s + log_sigma) + log_s +
               static_cast<double>(state_count);
  score.state_count = state_count;
  score.transition_count = transition_count;
  score.alphabet_size = alphabet_size;
  return score;
}

IrregularityScore EncodingCost(const Dfa& dfa) {
  return EncodingCost(dfa.transition_count(), dfa.state_count(),
                      static_cast<int>(dfa.Alphabet().size()));
}

IrregularityScore Irregularity(std::span<const Numeral> words) {
  return EncodingCost(Minimize(BuildTrie(words)));
}

IrregularityScore Irregularity(const NumeralSystem& system, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("Irregularity: empty range");
  const auto words = system.Range(lo, hi);
  return Irregularity(words);
}

double LocalIrregularity(const NumeralSystem& system, int window) {
  if (window < 1 || window > kNumberCount) {
    throw std::invalid_argument("LocalIrregularity: window must be in 1..99");
  }
  const auto all = system.Range(kMinNumber, kMaxNumber);
  double total = 0.0;
  const int windows = kNumberCount - window + 1;
  for (int start = 0; start < windows; ++start) {
    total += Irregularity(std::span<const Numeral>(all).subspan(start, window))
                 .bits;
  }
  return total / windows;
}

}  // namespace numlearn
