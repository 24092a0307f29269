#pragma once

#include <vector>

namespace modspec {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  int points = 0;
};

// Ordinary least squares y ~ slope * x + intercept. Constant y gives r2 = 1 when exact.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);
// Fit of log y against log x; nonpositive y entries are rejected.
LinearFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

// max / min of strictly positive entries; 1 for an empty or all-zero input.
double spread(const std::vector<double>& v);

}  // namespace modspec
