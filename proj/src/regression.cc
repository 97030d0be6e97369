#include "numlearn/regression.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace numlearn {

RegressionFit FitOls(std::span<const double> x, std::span<const double> y,
                     int min_points) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("FitOls: x and y differ in length");
  }
  const int n = static_cast<int>(x.size());
  if (n < min_points || n < 2) {
    throw InsufficientPointsError("insufficient points for regression: " +
                                  std::to_string(n) + " < " +
                                  std::to_string(std::max(min_points, 2)));
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("FitOls: x has no spread");

  RegressionFit fit;
  fit.n_points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
  } else {
    fit.stderr_slope = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

}  // namespace numlearn
