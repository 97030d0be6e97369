#include "numlearn/system.h"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace numlearn {

std::string_view ToString(SystemSource source) {
  switch (source) {
    case SystemSource::kBuiltin:
      return "builtin";
    case SystemSource::kIngested:
      return "ingested";
    case SystemSource::kGenerated:
      return "generated";
  }
  return "unknown";
}

void NumeralSystem::Set(int n, Numeral numeral) {
  numerals_.insert_or_assign(n, std::move(numeral));
}

const Numeral& NumeralSystem::at(int n) const {
  auto it = numerals_.find(n);
  if (it == numerals_.end()) {
    throw std::out_of_range("system '" + name_ + "' has no numeral for " +
                            std::to_string(n));
  }
  return it->second;
}

std::vector<Numeral> NumeralSystem::Range(int lo, int hi) const {
  std::vector<Numeral> out;
  out.reserve(hi >= lo ? hi - lo + 1 : 0);
  for (int n = lo; n <= hi; ++n) out.push_back(at(n));
  return out;
}

std::string ValidationReport::Summary() const {
  if (failures.empty()) return "ok";
  std::ostringstream os;
  os << failures.size() << " failure(s)";
  for (const auto& f : failures) os << "; " << f.message;
  return os.str();
}

ValidationReport ValidateSystem(const NumeralSystem& system) {
  ValidationReport report;
  using Kind = ValidationFailure::Kind;
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    if (!system.Contains(n)) {
      report.failures.push_back(
          {Kind::kMissing, n, 0, 0, "missing numeral for " + std::to_string(n)});
    }
  }
  std::map<Numeral, int> seen;
  for (const auto& [n, numeral] : system.numerals()) {
    if (n < kMinNumber || n > kMaxNumber) {
      report.failures.push_back({Kind::kOutOfRange, n, 0, 0,
                                 "key " + std::to_string(n) +
                                     " outside 1..99"});
    }
    std::int64_t value = 0;
    try {
      value = Evaluate(numeral);
    } catch (const std::overflow_error&) {
      value = -1;
    }
    if (value != n) {
      report.failures.push_back(
          {Kind::kValueMismatch, n, value, 0,
           std::to_string(n) + " -> '" + Render(numeral) + "' evaluates to " +
               std::to_string(value)});
    }
    auto [it, inserted] = seen.emplace(numeral, n);
    if (!inserted) {
      report.failures.push_back(
          {Kind::kDuplicateForm, n, 0, it->second,
           "'" + Render(numeral) + "' used for both " +
               std::to_string(it->second) + " and " + std::to_string(n)});
    }
  }
  return report;
}

SystemStats ComputeStats(const NumeralSystem& system) {
  std::set<Symbol> all;
  SystemStats stats;
  for (const auto& [n, numeral] : system.numerals()) {
    for (const Symbol& s : numeral.symbols()) all.insert(s);
    stats.total_length += numeral.length();
    ++stats.numeral_count;
  }
  stats.lexicon_size_all = static_cast<int>(all.size());
  for (const Symbol& s : all) stats.lexicon_size_atoms += s.is_atom() ? 1 : 0;
  return stats;
}

namespace {

std::string FormatErrorMessage(const std::string& origin, int line,
                               const std::string& what) {
  std::string prefix = origin.empty() ? "" : origin + ": ";
  if (line > 0) prefix += "line " + std::to_string(line) + ": ";
  return prefix + what;
}

std::string PureBase(int n, int base) {
  if (n <= base) return std::to_string(n);
  const int q = n / base;
  const int r = n % base;
  std::string head =
      q == 1 ? std::to_string(base) : std::to_string(q) + "*" + std::to_string(base);
  if (r == 0) return head;
  return head + "+" + std::to_string(r);
}

// 10/20 mixed bases: base 10 below 70, "3*20+10" in the 70s, "4*20" in the
// 80s and "4*20+10" in the 90s.
std::string FrenchLike(int n) {
  if (n < 70) return PureBase(n, 10);
  std::string head;
  int rest = 0;
  if (n < 80) {
    head = "3*20+10";
    rest = n - 70;
  } else if (n < 90) {
    head = "4*20";
    rest = n - 80;
  } else {
    head = "4*20+10";
    rest = n - 90;
  }
  return rest == 0 ? head : head + "+" + std::to_string(rest);
}

// Vigesimal with a decimal sub-base: 31 = 20+10+1, 91 = 4*20+10+1.
std::string BasqueLike(int n) {
  if (n <= 10) return std::to_string(n);
  if (n < 20) return "10+" + std::to_string(n - 10);
  const int q = n / 20;
  const int r = n % 20;
  std::string head = q == 1 ? "20" : std::to_string(q) + "*20";
  if (r == 0) return head;
  if (r <= 10) return head + "+" + std::to_string(r);
  return head + "+10+" + std::to_string(r - 10);
}

NumeralSystem FromGenerator(std::string name,
                            std::string (*form)(int)) {
  NumeralSystem system(std::move(name), SystemSource::kBuiltin);
  for (int n = kMinNumber; n <= kMaxNumber; ++n) system.Set(n, Tokenize(form(n)));
  return system;
}

}  // namespace

std::vector<std::string> BuiltinSystemNames() {
  return {"mandarin", "base10", "base20", "french_like", "basque_like"};
}

NumeralSystem BuiltinSystem(std::string_view name) {
  if (name == "mandarin") {
    return FromGenerator("mandarin", [](int n) { return PureBase(n, 10); });
  }
  if (name == "base10" || name == "base(10)") {
    return FromGenerator("base10", [](int n) { return PureBase(n, 10); });
  }
  if (name == "base20" || name == "base(20)") {
    return FromGenerator("base20", [](int n) { return PureBase(n, 20); });
  }
  if (name == "french_like") return FromGenerator("french_like", FrenchLike);
  if (name == "basque_like") return FromGenerator("basque_like", BasqueLike);
  throw UnknownSystemError("unknown builtin system '" + std::string(name) +
                           "'");
}

FormatError::FormatError(const std::string& origin, int line,
                         const std::string& what)
    : std::runtime_error(FormatErrorMessage(origin, line, what)), line_(line) {}

NumeralSystem ReadSystem(std::istream& in, std::string name,
                         SystemSource source, const std::string& origin) {
  NumeralSystem system(std::move(name), source);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError(origin, line_no, "expected '<n>\\t<numeral>'");
    }
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(line.substr(0, tab), &used);
      if (used != tab) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw FormatError(origin, line_no, "bad key '" + line.substr(0, tab) + "'");
    }
    if (n < kMinNumber || n > kMaxNumber) {
      throw FormatError(origin, line_no, "key " + std::to_string(n) + " outside 1..99");
    }
    if (system.Contains(n)) {
      throw FormatError(origin, line_no, "duplicate key " + std::to_string(n));
    }
    try {
      system.Set(n, Tokenize(line.substr(tab + 1)));
    } catch (const ParseError& e) {
      throw FormatError(origin, line_no, e.what());
    }
  }
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    if (!system.Contains(n)) {
      throw FormatError(origin, 0, "missing entry for " + std::to_string(n));
    }
  }
  return system;
}

NumeralSystem ReadSystemFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ReadSystem(in, std::filesystem::path(path).stem().string(),
                    SystemSource::kIngested, path);
}

void WriteSystem(std::ostream& out, const NumeralSystem& system) {
  out << "# " << system.name() << "\n";
  for (const auto& [n, numeral] : system.numerals()) {
    out << n << '\t' << Render(numeral) << '\n';
  }
}

void WriteSystemFile(const std::string& path, const NumeralSystem& system) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  WriteSystem(out, system);
}

}  // namespace numlearn
