#include <doctest.h>

#include <sstream>
#include <string>

#include "numlearn/system.h"

using namespace numlearn;

namespace {

// Mandarin forms written out by hand, independent of the builtin table.
std::string MandarinText(int n) {
  if (n <= 10) return std::to_string(n);
  const int tens = n / 10, ones = n % 10;
  std::string head = tens == 1 ? "10" : std::to_string(tens) + "*10";
  return ones == 0 ? head : head + "+" + std::to_string(ones);
}

int CountSymbols(const std::string& text) {
  int ops = 0;
  for (char c : text) ops += (c == '+' || c == '*' || c == '-') ? 1 : 0;
  return 2 * ops + 1;
}

NumeralSystem Parse(const std::string& text) {
  std::istringstream in(text);
  return ReadSystem(in, "t", SystemSource::kIngested, "t.txt");
}

std::string FullFile(int skip = 0) {
  std::string out = "# test\n";
  for (int n = 1; n <= 99; ++n) {
    if (n != skip) out += std::to_string(n) + "\t" + MandarinText(n) + "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("system") {

TEST_CASE("builtin mandarin matches the hand-written forms") {
  const NumeralSystem m = BuiltinSystem("mandarin");
  for (int n = 1; n <= 99; ++n) CHECK(Render(m.at(n)) == MandarinText(n));
  CHECK(ValidateSystem(m).accepted());
}

TEST_CASE("every builtin validates") {
  for (const auto& name : BuiltinSystemNames()) {
    CAPTURE(name);
    CHECK(ValidateSystem(BuiltinSystem(name)).accepted());
  }
  CHECK(Render(BuiltinSystem("french_like").at(97)) == "4*20+10+7");
  CHECK(Render(BuiltinSystem("french_like").at(71)) == "3*20+10+1");
  CHECK(Render(BuiltinSystem("basque_like").at(91)) == "4*20+10+1");
  CHECK(Render(BuiltinSystem("base20").at(45)) == "2*20+5");
  CHECK_THROWS_AS(BuiltinSystem("klingon"), UnknownSystemError);
}

TEST_CASE("mandarin statistics") {
  const SystemStats stats = ComputeStats(BuiltinSystem("mandarin"));
  CHECK(stats.lexicon_size_atoms == 10);
  CHECK(stats.lexicon_size_all == 12);
  int total = 0;
  for (int n = 1; n <= 99; ++n) total += CountSymbols(MandarinText(n));
  CHECK(stats.total_length == total);
  CHECK(stats.avg_complexity() == doctest::Approx(total / 99.0));
  CHECK(total == 421);
}

TEST_CASE("mandarin numeral lengths") {
  const NumeralSystem m = BuiltinSystem("mandarin");
  for (int n = 1; n <= 99; ++n) {
    const int len = m.at(n).length();
    CHECK((len == 1 || len == 3 || len == 5));
    CHECK((len == 5) == (n >= 21 && n % 10 != 0));
  }
}

TEST_CASE("single-atom system has complexity one") {
  NumeralSystem s("atoms", SystemSource::kGenerated);
  for (int n = 1; n <= 99; ++n) s.Set(n, Tokenize(std::to_string(n)));
  const SystemStats stats = ComputeStats(s);
  CHECK(stats.avg_complexity() == 1.0);
  CHECK(stats.lexicon_size_atoms == 99);
  CHECK(stats.lexicon_size_all == 99);
}

TEST_CASE("validation failures are itemised") {
  NumeralSystem s = BuiltinSystem("mandarin");
  s.Set(5, Tokenize("2+2"));
  s.Set(6, Tokenize("2+2"));
  const auto report = ValidateSystem(s);
  REQUIRE_FALSE(report.accepted());
  int mismatch = 0, duplicate = 0;
  for (const auto& f : report.failures) {
    if (f.kind == ValidationFailure::Kind::kValueMismatch) ++mismatch;
    if (f.kind == ValidationFailure::Kind::kDuplicateForm) {
      ++duplicate;
      CHECK(f.duplicate_of == 5);
    }
  }
  CHECK(mismatch == 2);
  CHECK(duplicate == 1);

  NumeralSystem partial("p", SystemSource::kIngested);
  partial.Set(1, Tokenize("1"));
  CHECK(ValidateSystem(partial).failures.size() == 98);
}

TEST_CASE("write then read reproduces the system") {
  for (const auto& name : BuiltinSystemNames()) {
    const NumeralSystem s = BuiltinSystem(name);
    std::ostringstream out;
    WriteSystem(out, s);
    std::istringstream in(out.str());
    CHECK(ReadSystem(in, name) == s);
  }
}

TEST_CASE("reader tolerates comments and CRLF") {
  std::string text = FullFile();
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  CHECK(Parse(crlf) == BuiltinSystem("mandarin"));
}

TEST_CASE("reader errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      Parse(text);
    } catch (const FormatError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("# x\n1\t1\n2 2\n") == 3);
  CHECK(line_of("1\t1\nx\t2\n") == 2);
  CHECK(line_of("1\t1\n100\t10*10\n") == 2);
  CHECK(line_of("1\t1\n1\t1\n") == 2);
  CHECK(line_of("1\t1\n2\t1++1\n") == 2);
  CHECK(line_of(FullFile(42)) == 0);

  try {
    Parse("1\t1\n2\t+\n");
    FAIL("expected a FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("t.txt: line 2:") == 0);
  }
}

TEST_CASE("at() throws outside the stored range") {
  const NumeralSystem m = BuiltinSystem("mandarin");
  CHECK_THROWS_AS(m.at(0), std::out_of_range);
  CHECK_THROWS_AS(m.at(100), std::out_of_range);
  CHECK(m.Range(1, 10).size() == 10);
}

}
