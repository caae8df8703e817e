#pragma once

#include <vector>

#include "carnot/group.hpp"
#include "carnot/measure.hpp"

namespace carnot {

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), evaluated in log space.
/// Throws Error(domain_error) unless a > 0 and b > 0.
double beta(double a, double b);
double log_beta(double a, double b);

/// Surface measure of the unit sphere S^n in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
/// S^0 = {-1, +1} has measure 2.
double sphere_surface(int n);

/// Input of the layer-weight integral  int_{|u|<1} |z_l|^{-gamma} du.
/// Only the layer dimensions of the group enter.
struct LayerIntegralParams {
  std::vector<int> layer_dims;
  int layer = 1;
  double gamma = 0.0;

  static LayerIntegralParams of(const GroupSpec& spec, int layer, double gamma) {
    return {spec.layer_dims(), layer, gamma};
  }
  int step() const { return static_cast<int>(layer_dims.size()); }
  /// Throws Error(domain_error) if gamma >= m_l, Error(invalid_argument) on a bad layer.
  void check() const;
};

/// Closed form of int_{|u|<1} |z_l|^{-gamma} du for gamma < m_l, as a product
/// of Beta functions. With R = 2 r!:
///
///   (prod_j omega_{m_j - 1}) * r! / (l R^{r-1}) * 1/(m_l - gamma)
///     * prod_{j != l} B( (l (m_l - gamma) + sum_{i != l, i < j} i m_i) / R + 1,  j m_j / R )
///
/// omega_{n-1} is the surface measure of the unit sphere of R^n (the factor
/// left after integrating out the angular part of each layer). The partial
/// sums carry i * m_i, not i * (m_i - 1); the latter agrees with this formula
/// only while every sum is empty (step <= 2) and is off by several percent
/// from sampling at step 3.
double layer_weight_integral(const LayerIntegralParams& params);

/// The same integral through the Dirichlet simplex integral
///   (prod_j omega_{m_j-1}) * (r!/R^r) * prod_j Gamma(a_j) / Gamma(1 + sum_j a_j),
/// a_j = j m_j / R except a_l = l (m_l - gamma) / R. Independent algebraic route.
double layer_weight_integral_dirichlet(const LayerIntegralParams& params);

/// Haar measure of the unit pseudo-ball (the gamma = 0 integral).
double unit_ball_volume(const GroupSpec& spec);

/// Sampling estimate of the same integral: mc_integrate of the layer_power
/// weight -gamma on the unit ball. Shares nothing with the closed forms.
IntegralEstimate layer_weight_integral_oracle(const GroupSpec& spec, int layer, double gamma,
                                              const SamplerConfig& cfg);

}  // namespace carnot
