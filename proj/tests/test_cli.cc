#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome Run(const std::string& args) {
  const std::string cmd = std::string(NUMLEARN_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) o.out += buf;
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("numlearn_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Second line, second column of a measure CSV.
double Bits(const std::string& csv) {
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const auto a = row.find(',');
  return std::stod(row.substr(a + 1, row.find(',', a + 1) - a - 1));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("measure mandarin up to ten") {
  const Outcome o = Run("measure mandarin --hi 10");
  REQUIRE(o.code == 0);
  CHECK(o.out.rfind("name,bits,state_count,transition_count,alphabet_size,local_bits\n", 0) == 0);
  CHECK(o.out.find("mandarin,56.219") != std::string::npos);
  CHECK(Bits(o.out) == doctest::Approx(56.219).epsilon(1e-5));
}

TEST_CASE("generate random is byte-stable") {
  const fs::path a = Scratch("rand_a"), b = Scratch("rand_b");
  REQUIRE(Run("generate random --seed 7 --out " + a.string()).code == 0);
  REQUIRE(Run("generate random --seed 7 --out " + b.string()).code == 0);
  CHECK(Slurp(a / "random_7.txt") == Slurp(b / "random_7.txt"));
  CHECK(Slurp(a / "random_7.json") == Slurp(b / "random_7.json"));
  CHECK_FALSE(Slurp(a / "random_7.txt").empty());
}

TEST_CASE("generate neighbourhood writes a manifest and re-measurable files") {
  const fs::path dir = Scratch("hood");
  REQUIRE(Run("generate neighbourhood --base basque_like --random-variants 1 --out " +
              dir.string()).code == 0);
  const auto manifest = nlohmann::json::parse(Slurp(dir / "basque_like_neighbourhood.json"));
  CHECK(manifest["alternatives"]["91"].size() == 6);
  CHECK(manifest["variants"].size() == 4);
  for (const auto& v : manifest["variants"]) {
    const Outcome m = Run("measure " + (dir / v["file"].get<std::string>()).string());
    REQUIRE(m.code == 0);
    CHECK(Bits(m.out) == v["irregularity_bits"].get<double>());
  }
}

TEST_CASE("exit codes") {
  CHECK(Run("measure klingon").code == 2);
  CHECK(Run("frobnicate").code == 2);
  const fs::path dir = Scratch("bad");
  {
    std::ofstream bad(dir / "bad.txt");
    bad << "1\t1\n2\t2+\n";
  }
  const Outcome o = Run("measure " + (dir / "bad.txt").string());
  CHECK(o.code == 2);
  CHECK(o.out.find("line 2") != std::string::npos);
}

TEST_CASE("tiny experiment and regression from its CSV") {
  const fs::path dir = Scratch("exp");
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({"epochs": 20, "eval_interval": 10, "repetitions": 1,
               "random_baselines": 2})";
  }
  const Outcome o = Run("exp2 --config " + (dir / "config.json").string() +
                        " --out " + (dir / "out").string() + " --parallel 2");
  REQUIRE(o.code == 0);
  CHECK(fs::exists(dir / "out" / "results.csv"));
  CHECK(fs::exists(dir / "out" / "traces" / "random_1_rep0.csv"));
  const Outcome r = Run("regress --in " + (dir / "out" / "results.csv").string());
  CHECK(r.code == 0);
  CHECK(r.out.find("n_points=5") != std::string::npos);

  {
    std::ofstream one(dir / "one.csv");
    one << "irregularity_bits,learnability\n201.2,0.5\n";
  }
  const Outcome refused = Run("regress --in " + (dir / "one.csv").string());
  CHECK(refused.code == 2);
  CHECK(refused.out.find("insufficient points") != std::string::npos);
}

}
