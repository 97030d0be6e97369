#ifndef NUMLEARN_NUMERAL_H_
#define NUMLEARN_NUMERAL_H_

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace numlearn {

// Atoms sort before combinators; atoms sort by value.
enum class SymbolKind : std::uint8_t { kAtom, kPlus, kMinus, kTimes };

// One morpheme: a number atom (digit or multiplier) or an arithmetic
// combinator. The same value is the same alphabet letter everywhere.
struct Symbol {
  SymbolKind kind = SymbolKind::kAtom;
  int value = 0;  // > 0 for atoms, 0 for combinators

  static Symbol Atom(int value);
  static constexpr Symbol Plus() { return {SymbolKind::kPlus, 0}; }
  static constexpr Symbol Minus() { return {SymbolKind::kMinus, 0}; }
  static constexpr Symbol Times() { return {SymbolKind::kTimes, 0}; }

  bool is_atom() const { return kind == SymbolKind::kAtom; }
  bool is_combinator() const { return kind != SymbolKind::kAtom; }
  std::string ToString() const;

  friend constexpr auto operator<=>(const Symbol&, const Symbol&) = default;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed infix expression: atoms at even indices, combinators at odd
// indices, starting and ending with an atom.
class Numeral {
 public:
  explicit Numeral(std::vector<Symbol> symbols);

  std::span<const Symbol> symbols() const { return symbols_; }
  int length() const { return static_cast<int>(symbols_.size()); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }

  // Number of atoms (= (length + 1) / 2).
  int atom_count() const { return (length() + 1) / 2; }

  friend auto operator<=>(const Numeral&, const Numeral&) = default;
  friend bool operator==(const Numeral&, const Numeral&) = default;

 private:
  std::vector<Symbol> symbols_;
};

// Parses the compact arithmetic notation ("4*20+10+1"). Digit runs are
// read maximally, so "10" is one atom.
Numeral Tokenize(std::string_view text);

// Inverse of Tokenize.
std::string Render(const Numeral& numeral);

// Arithmetic value with '*' binding tighter than '+'/'-', which associate
// left. Throws std::overflow_error if an intermediate leaves int64 range.
std::int64_t Evaluate(const Numeral& numeral);

}  // namespace numlearn

#endif  // NUMLEARN_NUMERAL_H_
