#include "alh/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace alh {
namespace {

// Lentz continued fraction for the incomplete beta; converges quickly for
// x < (a+1)/(a+b+2), the regime the wrapper restricts it to.
double beta_cf(double x, double a, double b) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double num = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + num / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + num / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("regularized_incomplete_beta: a, b must be > 0");
  if (!(x >= 0.0) || !(x <= 1.0))
    throw std::invalid_argument("regularized_incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(x, a, b) / a;
  return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0))
    throw std::invalid_argument("student_t_cdf: dof must be > 0");
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  const double x = dof / (t * t + dof);
  const double half_tail =
      0.5 * regularized_incomplete_beta(x, 0.5 * dof, 0.5);
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

TTestResult paired_t_test(const std::vector<double>& a,
                          const std::vector<double>& b, double level) {
  if (a.size() != b.size())
    throw std::invalid_argument("paired_t_test: sample length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("paired_t_test: need at least 2 pairs");
  if (!(level > 0.0) || !(level < 1.0))
    throw std::invalid_argument("paired_t_test: level outside (0, 1)");

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double m = mean(d);
  const double sd = sample_std(d);

  TTestResult result;
  if (sd == 0.0) {
    if (m == 0.0) return result;  // exact tie: t = 0, p = 1
    result.t = m > 0.0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
    result.p = 0.0;
    result.outcome = m > 0.0 ? Outcome::win : Outcome::loss;
    return result;
  }
  result.t = m / (sd / std::sqrt(static_cast<double>(n)));
  result.p = 2.0 * (1.0 - student_t_cdf(std::abs(result.t),
                                        static_cast<double>(n - 1)));
  if (result.p < 1.0 - level)
    result.outcome = m > 0.0 ? Outcome::win : Outcome::loss;
  return result;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::win: return "win";
    case Outcome::loss: return "loss";
    default: return "tie";
  }
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) {
    const double e = x - m;
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace alh
