// Shapiro-Wilk W test, following Royston (1995), Algorithm AS R94.

#include "driftscope/error.hpp"
#include "driftscope/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace driftscope {

namespace {

template <std::size_t N>
double poly(const double (&c)[N], double x)
{
  double r = 0.0;
  for (std::size_t i = N; i-- > 0;)
    r = r * x + c[i];
  return r;
}

constexpr double kG[] = {-2.273, 0.459};
constexpr double kC1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr double kC2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr double kC3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
constexpr double kC4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr double kC5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr double kC6[] = {-0.4803, -0.082676, 0.0030302};

// Half-vector of antisymmetric coefficients a_1 >= a_2 >= ... >= 0.
std::vector<double> coefficients(std::size_t n)
{
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  const boost::math::normal_distribution<double> stdnorm;
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = boost::math::quantile(stdnorm, (static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

  std::size_t first;
  double fac;
  if (n > 5) {
    const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
    first = 2;
  } else {
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    first = 1;
  }
  a[0] = a1;
  for (std::size_t i = first; i < half; ++i)
    a[i] = -m[i] / fac;
  return a;
}

} // namespace

NormalityReport shapiro_wilk(std::span<const double> sample, double alpha)
{
  const std::size_t n = sample.size();
  if (n < 3)
    throw ValidationError("Shapiro-Wilk needs at least 3 observations");
  if (n > 5000)
    throw ValidationError("Shapiro-Wilk approximation is limited to 5000 observations");

  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 1e-19 * std::max(1.0, std::abs(x.front()))))
    throw ValidationError("Shapiro-Wilk undefined for a sample with zero variance");

  // Work on range-scaled values for numerical stability.
  double mean = 0.0;
  for (double& v : x) {
    v /= range;
    mean += v;
  }
  mean /= static_cast<double>(n);
  double ssq = 0.0;
  for (double v : x)
    ssq += (v - mean) * (v - mean);

  const auto a = coefficients(n);
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    num += a[i] * (x[n - 1 - i] - x[i]);

  double w = std::min(1.0, num * num / ssq);

  NormalityReport rep;
  rep.n = n;
  rep.alpha = alpha;
  rep.w = w;

  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3.0;
    rep.p = std::max(0.0, pi6 * (std::asin(std::sqrt(w)) - stqr));
  } else {
    const double an = static_cast<double>(n);
    double y = std::log(1.0 - w);
    double mu;
    double sigma;
    if (n <= 11) {
      const double gamma = poly(kG, an);
      if (y >= gamma) {
        rep.p = 1e-99;
        rep.normal = rep.p >= alpha;
        return rep;
      }
      y = -std::log(gamma - y);
      mu = poly(kC3, an);
      sigma = std::exp(poly(kC4, an));
    } else {
      const double xx = std::log(an);
      mu = poly(kC5, xx);
      sigma = std::exp(poly(kC6, xx));
    }
    const boost::math::normal_distribution<double> dist(mu, sigma);
    rep.p = boost::math::cdf(boost::math::complement(dist, y));
  }
  rep.p = std::clamp(rep.p, 0.0, 1.0);
  rep.normal = rep.p >= alpha;
  return rep;
}

} // namespace driftscope
