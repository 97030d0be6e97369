#ifndef NUMLEARN_SYSTEM_H_
#define NUMLEARN_SYSTEM_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "numlearn/numeral.h"

namespace numlearn {

inline constexpr int kMinNumber = 1;
inline constexpr int kMaxNumber = 99;
inline constexpr int kNumberCount = kMaxNumber - kMinNumber + 1;

enum class SystemSource { kBuiltin, kIngested, kGenerated };

std::string_view ToString(SystemSource source);

// Mapping from numbers to numerals. Construction does not validate; call
// ValidateSystem before relying on totality/exactness.
class NumeralSystem {
 public:
  NumeralSystem() = default;
  NumeralSystem(std::string name, SystemSource source)
      : name_(std::move(name)), source_(source) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  SystemSource source() const { return source_; }

  void Set(int n, Numeral numeral);
  bool Contains(int n) const { return numerals_.contains(n); }
  // Throws std::out_of_range if n has no numeral.
  const Numeral& at(int n) const;

  const std::map<int, Numeral>& numerals() const { return numerals_; }

  // Numerals for lo..hi inclusive, ascending.
  std::vector<Numeral> Range(int lo, int hi) const;

  friend bool operator==(const NumeralSystem& a, const NumeralSystem& b) {
    return a.numerals_ == b.numerals_;
  }

 private:
  std::string name_;
  SystemSource source_ = SystemSource::kBuiltin;
  std::map<int, Numeral> numerals_;
};

struct ValidationFailure {
  enum class Kind { kMissing, kOutOfRange, kValueMismatch, kDuplicateForm };
  Kind kind;
  int number;
  std::int64_t value = 0;     // kValueMismatch: what the numeral evaluates to
  int duplicate_of = 0;       // kDuplicateForm: the other key with this form
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationFailure> failures;
  bool accepted() const { return failures.empty(); }
  std::string Summary() const;
};

ValidationReport ValidateSystem(const NumeralSystem& system);

struct SystemStats {
  int lexicon_size_atoms = 0;
  int lexicon_size_all = 0;
  int total_length = 0;
  int numeral_count = 0;
  double avg_complexity() const {
    return numeral_count == 0
               ? 0.0
               : static_cast<double>(total_length) / numeral_count;
  }
  friend bool operator==(const SystemStats&, const SystemStats&) = default;
};

SystemStats ComputeStats(const NumeralSystem& system);

class UnknownSystemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Names: "mandarin", "base10"/"base(10)", "base20"/"base(20)",
// "french_like", "basque_like".
NumeralSystem BuiltinSystem(std::string_view name);
std::vector<std::string> BuiltinSystemNames();

// Line-numbered error from the system-definition reader.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& origin, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// "<n>\t<numeral>" per line, '#' comments, keys exactly 1..99.
// `origin` (usually the path) prefixes error messages.
NumeralSystem ReadSystem(std::istream& in, std::string name,
                         SystemSource source = SystemSource::kIngested,
                         const std::string& origin = "");
NumeralSystem ReadSystemFile(const std::string& path);
void WriteSystem(std::ostream& out, const NumeralSystem& system);
void WriteSystemFile(const std::string& path, const NumeralSystem& system);

}  // namespace numlearn

#endif  // NUMLEARN_SYSTEM_H_
