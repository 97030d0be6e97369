#include "numlearn/numeral.h"

#include <charconv>
#include <limits>
#include <stdexcept>
#include <utility>

namespace numlearn {

namespace {

constexpr int kMaxAtomValue = 1'000'000'000;

char CombinatorChar(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::kPlus:
      return '+';
    case SymbolKind::kMinus:
      return '-';
    case SymbolKind::kTimes:
      return '*';
    case SymbolKind::kAtom:
      break;
  }
  return '?';
}

std::int64_t CheckedMul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw std::overflow_error("numeral value overflows int64");
  }
  return out;
}

std::int64_t CheckedAdd(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("numeral value overflows int64");
  }
  return out;
}

}  // namespace

Symbol Symbol::Atom(int value) {
  if (value < 1) {
    throw std::invalid_argument("atom value must be >= 1, got " +
                                std::to_string(value));
  }
  return {SymbolKind::kAtom, value};
}

std::string Symbol::ToString() const {
  if (is_atom()) return std::to_string(value);
  return std::string(1, CombinatorChar(kind));
}

Numeral::Numeral(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ParseError("numeral must not be empty");
  if (symbols_.size() % 2 == 0) {
    throw ParseError("numeral must start and end with an atom");
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const Symbol& s = symbols_[i];
    const bool want_atom = (i % 2 == 0);
    if (want_atom != s.is_atom()) {
      throw ParseError("symbol " + s.ToString() + " at position " +
                       std::to_string(i + 1) + " breaks atom/combinator "
                       "alternation");
    }
    if (s.is_atom() && s.value < 1) {
      throw ParseError("atom value must be >= 1");
    }
  }
}

Numeral Tokenize(std::string_view text) {
  if (text.empty()) throw ParseError("empty numeral string");
  std::vector<Symbol> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      std::size_t j = i;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
      int value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, value);
      if (ec != std::errc() || value > kMaxAtomValue) {
        throw ParseError("atom out of range in '" + std::string(text) + "'");
      }
      if (value == 0) {
        throw ParseError("zero-valued atom in '" + std::string(text) + "'");
      }
      if (!out.empty() && out.back().is_atom()) {
        throw ParseError("adjacent atoms in '" + std::string(text) + "'");
      }
      out.push_back(Symbol::Atom(value));
      i = j;
      continue;
    }
    Symbol op;
    switch (c) {
      case '+':
        op = Symbol::Plus();
        break;
      case '-':
        op = Symbol::Minus();
        break;
      case '*':
        op = Symbol::Times();
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c +
                         "' in '" + std::string(text) + "'");
    }
    if (out.empty()) {
      throw ParseError("leading combinator in '" + std::string(text) + "'");
    }
    if (out.back().is_combinator()) {
      throw ParseError("adjacent combinators in '" + std::string(text) + "'");
    }
    out.push_back(op);
    ++i;
  }
  if (out.back().is_combinator()) {
    throw ParseError("trailing combinator in '" + std::string(text) + "'");
  }
  return Numeral(std::move(out));
}

std::string Render(const Numeral& numeral) {
  std::string out;
  for (const Symbol& s : numeral.symbols()) out += s.ToString();
  return out;
}

std::int64_t Evaluate(const Numeral& numeral) {
  const auto syms = numeral.symbols();
  std::int64_t total = 0;
  std::int64_t term = syms[0].value;
  int sign = 1;
  for (std::size_t i = 1; i < syms.size(); i += 2) {
    const Symbol& op = syms[i];
    const std::int64_t rhs = syms[i + 1].value;
    if (op.kind == SymbolKind::kTimes) {
      term = CheckedMul(term, rhs);
      continue;
    }
    total = CheckedAdd(total, sign * term);
    sign = (op.kind == SymbolKind::kPlus) ? 1 : -1;
    term = rhs;
  }
  return CheckedAdd(total, sign * term);
}

}  // namespace numlearn
