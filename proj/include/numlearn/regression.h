#ifndef NUMLEARN_REGRESSION_H_
#define NUMLEARN_REGRESSION_H_

#include <span>
#include <stdexcept>

namespace numlearn {

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;  // NaN with only two points
  int n_points = 0;
};

class InsufficientPointsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ordinary least squares y = intercept + slope * x on raw values.
// Throws InsufficientPointsError below `min_points` and
// std::invalid_argument when x has no spread or the sizes differ.
RegressionFit FitOls(std::span<const double> x, std::span<const double> y,
                     int min_points = 2);

}  // namespace numlearn

#endif  // NUMLEARN_REGRESSION_H_
