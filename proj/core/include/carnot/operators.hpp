#pragma once

#include <cstdint>

#include "carnot/group.hpp"
#include "carnot/measure.hpp"
#include "carnot/trial.hpp"

namespace carnot {

enum class WeightPlacement { full_norm, layer };

/// Exponents of the weighted kernel
///   |u|^{-alpha} |u^{-1} v|^{-lambda} |v|^{-beta}          (full_norm)
///   |z_l|^{-alpha} |u^{-1} v|^{-lambda} |z'_l|^{-beta}     (layer)
struct KernelParams {
  double lambda = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  WeightPlacement placement = WeightPlacement::full_norm;
  int layer = 0;

  /// Throws Error(invalid_argument) unless 0 < lambda < Q and the layer is valid.
  void check(const GroupSpec& spec) const;
  /// Weight on the u side, |u|^{-alpha} or |z_l(u)|^{-alpha}.
  WeightSpec left_weight() const;
  /// Weight on the v side.
  WeightSpec right_weight() const;
  /// Dilation exponent of the two weights together: alpha + beta, or
  /// l (alpha + beta) for layer weights.
  double weight_homogeneity() const;
};

/// T f(u) = int f(v) |u^{-1} v|^{-lambda} dv over the domain.
IntegralEstimate eval_T(const GroupSpec& spec, const TrialFunction& f, double lambda, const Point& u,
                        const BallSpec& domain, const SamplerConfig& cfg);

/// S g(u) = |u|^{-alpha} int g(v) |u^{-1} v|^{-lambda} |v|^{-beta} dv (or the
/// layer variant). Throws Error(singular_evaluation_point) when u lies on the
/// singular set of its weight and alpha != 0.
IntegralEstimate eval_S(const GroupSpec& spec, const TrialFunction& g, const KernelParams& kp, const Point& u,
                        const BallSpec& domain, const SamplerConfig& cfg);

/// Double integral of f(u) g(v) times the weighted kernel over domain x domain.
IntegralEstimate bilinear_form(const GroupSpec& spec, const TrialFunction& f, const TrialFunction& g,
                               const KernelParams& kp, const BallSpec& domain, const SamplerConfig& cfg);

/// int f(u) S g(u) du with S g estimated by an inner average of `inner_samples`
/// draws at each outer point. The outer average is unbiased, so its sample
/// variance is the full error of the nested estimate.
IntegralEstimate dual_pairing(const GroupSpec& spec, const TrialFunction& f, const TrialFunction& g,
                              const KernelParams& kp, const BallSpec& domain, const SamplerConfig& cfg,
                              std::uint64_t inner_samples = 256);

/// (∫ |f|^p)^{1/p} over the domain, sampled around the focus of f.
IntegralEstimate trial_lp_norm(const GroupSpec& spec, const TrialFunction& f, double p, const BallSpec& domain,
                               const SamplerConfig& cfg);

struct SteinWeissRatio {
  IntegralEstimate ratio;
  IntegralEstimate bilinear;
  IntegralEstimate norm_f;
  IntegralEstimate norm_g;
};

/// |bilinear| / (||f||_r ||g||_s), the three estimates drawn independently.
/// Throws Error(zero_norm) when either norm is within 3 standard errors of 0.
SteinWeissRatio stein_weiss_ratio(const GroupSpec& spec, const TrialFunction& f, const TrialFunction& g,
                                  const KernelParams& kp, double r_exp, double s_exp, const BallSpec& domain,
                                  const SamplerConfig& cfg);

/// Exponent e with ratio(f o delta_t, g o delta_t) = t^e ratio(f, g);
/// zero exactly when the balance condition holds.
double ratio_dilation_exponent(const GroupSpec& spec, const KernelParams& kp, double r_exp, double s_exp);

}  // namespace carnot
