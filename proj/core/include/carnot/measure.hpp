#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/random.hpp"

namespace carnot {

/// Open pseudo-ball B(center, radius) = {v : d(center, v) < radius}.
struct BallSpec {
  Point center;
  double radius = 1.0;

  static BallSpec centered(const GroupSpec& spec, double radius) { return {identity(spec), radius}; }
  bool is_centered() const;
  /// Throws Error(invalid_argument) unless radius > 0 and the center matches the group.
  void check(const GroupSpec& spec) const;
};

enum class WeightKind { unweighted, full_norm_power, layer_power };

/// Power weight |u|^a (full_norm_power) or |z_l|^a (layer_power).
struct WeightSpec {
  WeightKind kind = WeightKind::unweighted;
  double exponent = 0.0;
  int layer = 0;

  static WeightSpec none() { return {}; }
  static WeightSpec full_norm(double a) { return {WeightKind::full_norm_power, a, 0}; }
  static WeightSpec layer_power(int l, double a) { return {WeightKind::layer_power, a, l}; }

  /// Returns +inf on the singular set when the exponent is negative.
  double operator()(const GroupSpec& spec, std::span<const double> u) const;
  void check(const GroupSpec& spec) const;
  /// The same weight raised to the power tau.
  WeightSpec pow(double tau) const { return {kind, exponent * tau, layer}; }
};

struct SamplerConfig {
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 20240611;
  SamplingScheme scheme = SamplingScheme::pseudo_random;
  /// Mix radial power-law proposals into the sampler around known
  /// singularities of the integrand.
  bool stratify_singularity = true;
  /// Evaluate each uniform point and its reflection 1 - x as one observation.
  bool antithetic = false;
  /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;

  SamplerConfig with_seed(std::uint64_t s) const {
    auto c = *this;
    c.seed = s;
    return c;
  }
  SamplerConfig with_samples(std::uint64_t n) const {
    auto c = *this;
    c.n_samples = n;
    return c;
  }
};

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;

  /// (value - expected) / std_error. An exact estimate (std_error 0) scores 0
  /// when it matches to 1e-12 relative and ±inf otherwise.
  double z_score(double expected) const;
};

/// Means of several integrands estimated from one sample set, with the
/// covariance matrix of those means (row-major, k x k).
struct VectorEstimate {
  std::vector<double> values;
  std::vector<double> covariance;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;

  IntegralEstimate component(std::size_t i) const;
  double cov(std::size_t i, std::size_t j) const { return covariance[i * values.size() + j]; }
};

/// Integrand evaluated at a point given in full coordinates.
using Integrand = std::function<double(std::span<const double>)>;

/// Known singular behaviour of an integrand, used to shape the proposal.
///   point: ~ d(anchor, v)^{-exponent}
///   layer: ~ |z_layer(v)|^{-exponent}  (singular set through the identity)
struct Singularity {
  enum class Kind { point, layer };
  Kind kind = Kind::point;
  Point anchor;
  int layer = 1;
  double exponent = 0.0;

  static Singularity at_point(Point anchor, double s) { return {Kind::point, std::move(anchor), 1, s}; }
  static Singularity on_layer(int l, double s) { return {Kind::layer, {}, l, s}; }
};

/// The singularity hint implied by a weight (empty if the weight is bounded).
std::vector<Singularity> singularities_of(const GroupSpec& spec, const WeightSpec& weight);

// ---------------------------------------------------------------------------

struct BallSample {
  std::vector<Point> points;
  double acceptance_rate = 0.0;
  std::uint64_t proposals = 0;
};

/// Haar-uniform points in the ball by rejection from the box |z_l|_inf <= R^l
/// (translated by group multiplication). Throws Error(degenerate_sampler) if
/// fewer than 1e-4 of a warm-up batch are accepted.
BallSample sample_ball(const GroupSpec& spec, const BallSpec& ball, const SamplerConfig& cfg);

/// Integral of integrand * weight over the ball with respect to Haar
/// (= Lebesgue) measure. A null integrand means 1. Non-finite integrand values
/// are resampled; more than 10 in a row raise Error(non_finite_sample).
IntegralEstimate mc_integrate(const GroupSpec& spec, const BallSpec& domain, const Integrand& integrand,
                              const WeightSpec& weight, const SamplerConfig& cfg);

/// Same estimator with explicit singularity hints and no separate weight.
IntegralEstimate mc_integrate(const GroupSpec& spec, const BallSpec& domain, const Integrand& integrand,
                              const std::vector<Singularity>& hints, const SamplerConfig& cfg);

/// Several integrands sharing one sample set.
VectorEstimate mc_integrate_many(const GroupSpec& spec, const BallSpec& domain,
                                 const std::vector<Integrand>& integrands,
                                 const std::vector<Singularity>& hints, const SamplerConfig& cfg);

/// (int |f|^p w)^{1/p}, error propagated by the delta method.
IntegralEstimate weighted_lp_norm(const GroupSpec& spec, const Integrand& f, double p, const WeightSpec& weight,
                                  const BallSpec& domain, const SamplerConfig& cfg);

IntegralEstimate ball_volume(const GroupSpec& spec, const BallSpec& ball, const SamplerConfig& cfg);

/// |delta_t(B_1)| / |B_1| from two independent estimates; should equal t^Q.
IntegralEstimate haar_scaling_check(const GroupSpec& spec, double t, const SamplerConfig& cfg);

/// int_{B(0,2r)} w^tau / int_{B(0,r)} w^tau. Throws Error(non_integrable_weight)
/// if w^tau is not locally integrable at its singular set.
IntegralEstimate doubling_ratio(const GroupSpec& spec, const WeightSpec& weight, double tau, double radius,
                                const SamplerConfig& cfg);

/// a / b for independent estimates, first-order error propagation.
IntegralEstimate ratio_of(const IntegralEstimate& a, const IntegralEstimate& b);

}  // namespace carnot
