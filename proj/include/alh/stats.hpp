#pragma once

#include <vector>

namespace alh {

enum class Outcome { win, tie, loss };

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  Outcome outcome = Outcome::tie;
};

// I_x(a, b), evaluated by continued fraction to ~1e-15.
double regularized_incomplete_beta(double x, double a, double b);

// CDF of Student's t with dof degrees of freedom.
double student_t_cdf(double t, double dof);

// Two-tailed paired t-test on a - b. win when p < 1 - level and the mean
// difference is positive, loss when negative, tie otherwise. Zero-variance
// differences give p = 0 (or a tie when the mean is also zero).
TTestResult paired_t_test(const std::vector<double>& a,
                          const std::vector<double>& b, double level = 0.95);

const char* outcome_name(Outcome o);

double mean(const std::vector<double>& v);
double sample_std(const std::vector<double>& v);  // ddof = 1; 0 for n < 2

}  // namespace alh
