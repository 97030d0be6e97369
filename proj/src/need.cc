#include "numlearn/need.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace numlearn {

namespace {

std::array<double, kNumberCount> Normalize(std::array<double, kNumberCount> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("need distribution needs positive finite mass");
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

NeedDistribution NeedDistribution::PowerLaw(double exponent) {
  std::array<double, kNumberCount> w{};
  for (int n = kMinNumber; n <= kMaxNumber; ++n) {
    w[n - kMinNumber] = std::pow(static_cast<double>(n), -exponent);
  }
  return NeedDistribution(Kind::kPowerLaw, Normalize(w));
}

NeedDistribution NeedDistribution::Uniform() {
  std::array<double, kNumberCount> w{};
  w.fill(1.0 / kNumberCount);
  return NeedDistribution(Kind::kUniform, w);
}

NeedDistribution NeedDistribution::FromWeights(std::span<const double> weights) {
  if (weights.size() != static_cast<std::size_t>(kNumberCount)) {
    throw std::invalid_argument("need distribution needs 99 weights");
  }
  std::array<double, kNumberCount> w{};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("negative weight");
    w[i] = weights[i];
  }
  return NeedDistribution(Kind::kCustom, Normalize(w));
}

NeedDistribution NeedDistribution::FromName(const std::string& name) {
  if (name == "power" || name == "power_law") return PowerLaw();
  if (name == "uniform") return Uniform();
  throw std::invalid_argument("unknown distribution '" + name +
                              "' (expected power or uniform)");
}

std::string NeedDistribution::name() const {
  switch (kind_) {
    case Kind::kPowerLaw:
      return "power";
    case Kind::kUniform:
      return "uniform";
    case Kind::kCustom:
      return "custom";
  }
  return "custom";
}

}  // namespace numlearn
