#include "carnot/special.hpp"

#include <cmath>
#include <numbers>

#include "carnot/error.hpp"

namespace carnot {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double log_sphere_product(const std::vector<int>& dims) {
  double s = 0.0;
  for (int m : dims) s += std::log(sphere_surface(m - 1));
  return s;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::domain_error, "log_gamma needs x > 0");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);  // reentrant: lgamma() writes the global signgam
#else
  return std::lgamma(x);
#endif
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::domain_error, "Beta(a, b) needs a > 0 and b > 0");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta(double a, double b) { return std::exp(log_beta(a, b)); }

double sphere_surface(int n) {
  if (n < 0) throw Error(ErrorCode::domain_error, "sphere dimension must be >= 0");
  const double h = 0.5 * (n + 1);
  return 2.0 * std::exp(h * std::log(std::numbers::pi) - log_gamma(h));
}

void LayerIntegralParams::check() const {
  if (layer_dims.empty()) throw Error(ErrorCode::invalid_argument, "group has no layers");
  for (int m : layer_dims) {
    if (m < 1) throw Error(ErrorCode::invalid_argument, "layer dimensions must be positive");
  }
  if (layer < 1 || layer > step()) throw Error(ErrorCode::invalid_argument, "layer must lie in [1, step]");
  const double m = layer_dims[static_cast<std::size_t>(layer - 1)];
  if (!(gamma < m)) {
    throw Error(ErrorCode::domain_error,
                "|z_l|^{-gamma} is integrable on the unit ball only for gamma < m_l = " + std::to_string(layer_dims[static_cast<std::size_t>(layer - 1)]));
  }
}

double layer_weight_integral(const LayerIntegralParams& p) {
  p.check();
  const int r = p.step();
  const int l = p.layer;
  const double big_r = 2.0 * factorial(r);
  const double ml = p.layer_dims[static_cast<std::size_t>(l - 1)];

  double log_value = log_sphere_product(p.layer_dims) + std::log(factorial(r)) - std::log(static_cast<double>(l)) -
                     (r - 1) * std::log(big_r) - std::log(ml - p.gamma);
  double partial = l * (ml - p.gamma);
  for (int j = 1; j <= r; ++j) {
    if (j == l) continue;
    const double mj = p.layer_dims[static_cast<std::size_t>(j - 1)];
    log_value += log_beta(partial / big_r + 1.0, j * mj / big_r);
    partial += j * mj;
  }
  return std::exp(log_value);
}

double layer_weight_integral_dirichlet(const LayerIntegralParams& p) {
  p.check();
  const int r = p.step();
  const double big_r = 2.0 * factorial(r);
  double log_value = log_sphere_product(p.layer_dims) + std::log(factorial(r)) - r * std::log(big_r);
  double total = 0.0;
  for (int j = 1; j <= r; ++j) {
    const double mj = p.layer_dims[static_cast<std::size_t>(j - 1)];
    const double a = j == p.layer ? j * (mj - p.gamma) / big_r : j * mj / big_r;
    log_value += log_gamma(a);
    total += a;
  }
  return std::exp(log_value - log_gamma(1.0 + total));
}

double unit_ball_volume(const GroupSpec& spec) {
  return layer_weight_integral(LayerIntegralParams::of(spec, 1, 0.0));
}

IntegralEstimate layer_weight_integral_oracle(const GroupSpec& spec, int layer, double gamma,
                                              const SamplerConfig& cfg) {
  LayerIntegralParams::of(spec, layer, gamma).check();
  return mc_integrate(spec, BallSpec::centered(spec, 1.0), Integrand{}, WeightSpec::layer_power(layer, -gamma), cfg);
}

}  // namespace carnot
