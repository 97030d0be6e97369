#ifndef NUMLEARN_NEED_H_
#define NUMLEARN_NEED_H_

#include <array>
#include <random>
#include <span>
#include <string>

#include "numlearn/system.h"

namespace numlearn {

// Probability mass over the numbers 1..99.
class NeedDistribution {
 public:
  enum class Kind { kPowerLaw, kUniform, kCustom };

  // pmf(n) proportional to n^-exponent.
  static NeedDistribution PowerLaw(double exponent = 2.0);
  static NeedDistribution Uniform();
  // weights[i] is the unnormalized mass of n = i + 1.
  static NeedDistribution FromWeights(std::span<const double> weights);
  // "power" / "uniform".
  static NeedDistribution FromName(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;
  double pmf(int n) const { return pmf_[n - kMinNumber]; }
  std::span<const double> pmf() const { return pmf_; }

  // Each consumer owns its sampler; the distribution itself stays shareable.
  std::discrete_distribution<int> MakeSampler() const {
    return std::discrete_distribution<int>(pmf_.begin(), pmf_.end());
  }
  template <typename Rng>
  static int Draw(std::discrete_distribution<int>& sampler, Rng& rng) {
    return sampler(rng) + kMinNumber;
  }

 private:
  NeedDistribution(Kind kind, std::array<double, kNumberCount> pmf)
      : kind_(kind), pmf_(pmf) {}

  Kind kind_;
  std::array<double, kNumberCount> pmf_{};
};

}  // namespace numlearn

#endif  // NUMLEARN_NEED_H_
