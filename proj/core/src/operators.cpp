#include "carnot/operators.hpp"

#include <cmath>
#include <limits>

#include "carnot/detail/proposal.hpp"
#include "carnot/detail/sampling.hpp"
#include "carnot/error.hpp"

namespace carnot {

namespace {

constexpr int kMaxResample = 10;
constexpr std::uint64_t kNormFTag = 0x6A09E667F3BCC908ULL;
constexpr std::uint64_t kNormGTag = 0xBB67AE8584CAA73BULL;

std::vector<Singularity> weight_hints(const GroupSpec& spec, const WeightSpec& w) {
  return singularities_of(spec, w);
}

double kernel(const GroupSpec& spec, std::span<const double> u, std::span<const double> v, double lambda,
              std::span<double> scratch) {
  return std::pow(pseudo_distance(spec, u, v, scratch), -lambda);
}

// A radial component around where a trial function lives; the proposal clips
// the exponent below Q, which puts a fixed share of draws near the focus.
Singularity focus_hint(const GroupSpec& spec, const TrialFunction& f) {
  return Singularity::at_point(f.focus(spec), spec.homogeneous_dimension());
}

detail::MixtureProposal outer_proposal(const GroupSpec& spec, const BallSpec& domain, const KernelParams& kp,
                                       const TrialFunction& f, const SamplerConfig& cfg) {
  auto hints = weight_hints(spec, kp.left_weight());
  hints.push_back(focus_hint(spec, f));
  return detail::MixtureProposal(spec, domain, hints, cfg.stratify_singularity);
}

// Proposal for v given u: kernel singularity at u (hint 0), the v-side weight
// and the focus of g.
detail::MixtureProposal inner_proposal(const GroupSpec& spec, const BallSpec& domain, const KernelParams& kp,
                                       const TrialFunction& g, const SamplerConfig& cfg) {
  std::vector<Singularity> hints{Singularity::at_point(identity(spec), kp.lambda)};
  for (auto& h : weight_hints(spec, kp.right_weight())) hints.push_back(std::move(h));
  hints.push_back(focus_hint(spec, g));
  return detail::MixtureProposal(spec, domain, hints, cfg.stratify_singularity);
}

}  // namespace

void KernelParams::check(const GroupSpec& spec) const {
  const double q = spec.homogeneous_dimension();
  if (!(lambda > 0.0 && lambda < q)) throw Error(ErrorCode::invalid_argument, "kernel needs 0 < λ < Q");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw Error(ErrorCode::invalid_argument, "α, β must be finite");
  if (placement == WeightPlacement::layer && (layer < 1 || layer > spec.step())) {
    throw Error(ErrorCode::invalid_argument, "layer weights need 1 <= l <= step");
  }
}

WeightSpec KernelParams::left_weight() const {
  if (alpha == 0.0) return WeightSpec::none();
  return placement == WeightPlacement::full_norm ? WeightSpec::full_norm(-alpha) : WeightSpec::layer_power(layer, -alpha);
}

WeightSpec KernelParams::right_weight() const {
  if (beta == 0.0) return WeightSpec::none();
  return placement == WeightPlacement::full_norm ? WeightSpec::full_norm(-beta) : WeightSpec::layer_power(layer, -beta);
}

double KernelParams::weight_homogeneity() const {
  return placement == WeightPlacement::full_norm ? alpha + beta : layer * (alpha + beta);
}

IntegralEstimate eval_T(const GroupSpec& spec, const TrialFunction& f, double lambda, const Point& u,
                        const BallSpec& domain, const SamplerConfig& cfg) {
  KernelParams kp;
  kp.lambda = lambda;
  return eval_S(spec, f, kp, u, domain, cfg);
}

IntegralEstimate eval_S(const GroupSpec& spec, const TrialFunction& g, const KernelParams& kp, const Point& u,
                        const BallSpec& domain, const SamplerConfig& cfg) {
  kp.check(spec);
  domain.check(spec);
  if (u.size() != static_cast<std::size_t>(spec.dimension())) {
    throw Error(ErrorCode::invalid_argument, "evaluation point does not match the group dimension");
  }
  const auto lw = kp.left_weight();
  const double prefactor = lw(spec, u.coords);
  if (!std::isfinite(prefactor) || (kp.alpha != 0.0 && prefactor == 0.0)) {
    throw Error(ErrorCode::singular_evaluation_point, "u lies on the singular set of the weight");
  }

  std::vector<Singularity> hints{Singularity::at_point(u, kp.lambda)};
  for (auto& h : weight_hints(spec, kp.right_weight())) hints.push_back(std::move(h));
  hints.push_back(focus_hint(spec, g));
  const auto rw = kp.right_weight();
  const double lambda = kp.lambda;
  Integrand integrand = [&spec, &g, &u, rw, lambda](std::span<const double> v) {
    const double gv = g(spec, v);
    if (gv == 0.0) return 0.0;
    thread_local std::vector<double> scratch;
    scratch.resize(2 * v.size());
    return gv * kernel(spec, u.coords, v, lambda, scratch) * rw(spec, v);
  };
  auto est = mc_integrate(spec, domain, integrand, hints, cfg);
  est.value *= prefactor;
  est.std_error *= prefactor;
  return est;
}

IntegralEstimate bilinear_form(const GroupSpec& spec, const TrialFunction& f, const TrialFunction& g,
                               const KernelParams& kp, const BallSpec& domain, const SamplerConfig& cfg) {
  kp.check(spec);
  domain.check(spec);
  if (cfg.n_samples < 1) throw Error(ErrorCode::invalid_argument, "n_samples must be >= 1");
  const auto n = static_cast<std::size_t>(spec.dimension());
  const auto lw = kp.left_weight();
  const auto rw = kp.right_weight();
  const detail::MixtureProposal outer = outer_proposal(spec, domain, kp, f, cfg);
  const detail::MixtureProposal inner = inner_proposal(spec, domain, kp, g, cfg);
  const std::size_t du = outer.dim();
  const int kernel_comp = inner.component_for_hint(0);
  const double lambda = kp.lambda;

  auto make_sampler = [&] {
    return [&, pu = outer, pv = inner, u = std::vector<double>(n), v = std::vector<double>(n),
            scratch = std::vector<double>(2 * n)](UniformSource& src, std::span<double> out) mutable {
      for (int attempt = 0;; ++attempt) {
        pu.sample(src, 0, u);
        if (!pu.in_domain(u)) {
          out[0] = 0.0;
          return;
        }
        const double fu = f(spec, u);
        if (fu == 0.0) {
          out[0] = 0.0;
          return;
        }
        if (kernel_comp >= 0) pv.set_anchor(static_cast<std::size_t>(kernel_comp), u);
        pv.sample(src, du, v);
        if (!pv.in_domain(v)) {
          out[0] = 0.0;
          return;
        }
        const double gv = g(spec, v);
        double x = 0.0;
        if (gv != 0.0) {
          const double num = fu * gv * lw(spec, u) * kernel(spec, u, v, lambda, scratch) * rw(spec, v);
          x = num / (pu.density(u) * pv.density(v));
        }
        if (std::isfinite(x)) {
          out[0] = x;
          return;
        }
        if (attempt >= kMaxResample) {
          throw Error(ErrorCode::non_finite_sample, "bilinear integrand non-finite on more than 10 consecutive draws");
        }
        src.next_point();
      }
    };
  };

  auto acc = detail::run_sampling(cfg, outer.dim() + inner.dim(), 1, make_sampler);
  return {acc.mean()[0], std::sqrt(std::max(0.0, acc.mean_covariance()[0])), cfg.n_samples, cfg.seed};
}

IntegralEstimate dual_pairing(const GroupSpec& spec, const TrialFunction& f, const TrialFunction& g,
                              const KernelParams& kp, const BallSpec& domain, const SamplerConfig& cfg,
                              std::uint64_t inner_samples) {
  kp.check(spec);
  domain.check(spec);
  if (cfg.n_samples < 1 || inner_samples < 1) throw Error(ErrorCode::invalid_argument, "sample counts must be >= 1");
  const auto n = static_cast<std::size_t>(spec.dimension());
  const auto lw = kp.left_weight();
  const auto rw = kp.right_weight();
  const detail::MixtureProposal outer = outer_proposal(spec, domain, kp, f, cfg);
  const detail::MixtureProposal inner = inner_proposal(spec, domain, kp, g, cfg);
  const double lambda = kp.lambda;
  const std::size_t dv = inner.dim();
  const int kernel_comp = inner.component_for_hint(0);

  auto make_sampler = [&] {
    return [&, pu = outer, pv = inner, u = std::vector<double>(n), v = std::vector<double>(n),
            scratch = std::vector<double>(2 * n)](UniformSource& src, std::span<double> out) mutable {
      for (int attempt = 0;; ++attempt) {
        pu.sample(src, 0, u);
        double x = 0.0;
        if (pu.in_domain(u)) {
          const double fu = f(spec, u);
          if (fu != 0.0) {
            if (kernel_comp >= 0) pv.set_anchor(static_cast<std::size_t>(kernel_comp), u);
            UniformSource inner_src(SamplingScheme::pseudo_random, src.aux().next_u64(), 0, dv, 0);
            double sum = 0.0;
            for (std::uint64_t i = 0; i < inner_samples; ++i) {
              inner_src.next_point();
              pv.sample(inner_src, 0, v);
              if (!pv.in_domain(v)) continue;
              const double gv = g(spec, v);
              if (gv == 0.0) continue;
              double y = gv * kernel(spec, u, v, lambda, scratch) * rw(spec, v) / pv.density(v);
              for (int retry = 0; !std::isfinite(y) && retry < kMaxResample; ++retry) {
                inner_src.next_point();
                pv.sample(inner_src, 0, v);
                y = pv.in_domain(v) ? g(spec, v) * kernel(spec, u, v, lambda, scratch) * rw(spec, v) / pv.density(v)
                                    : 0.0;
              }
              sum += y;
            }
            const double s_hat = lw(spec, u) * sum / static_cast<double>(inner_samples);
            x = fu * s_hat / pu.density(u);
          }
        }
        if (std::isfinite(x)) {
          out[0] = x;
          return;
        }
        if (attempt >= kMaxResample) {
          throw Error(ErrorCode::non_finite_sample, "duality integrand non-finite on more than 10 consecutive draws");
        }
        src.next_point();
      }
    };
  };

  auto acc = detail::run_sampling(cfg, outer.dim(), 1, make_sampler);
  return {acc.mean()[0], std::sqrt(std::max(0.0, acc.mean_covariance()[0])), cfg.n_samples, cfg.seed};
}

IntegralEstimate trial_lp_norm(const GroupSpec& spec, const TrialFunction& f, double p, const BallSpec& domain,
                               const SamplerConfig& cfg) {
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_argument, "L^p norm needs p >= 1");
  Integrand power = [&spec, &f, p](std::span<const double> u) {
    const double x = std::abs(f(spec, u));
    return x == 0.0 ? 0.0 : std::pow(x, p);
  };
  const auto integral = mc_integrate(spec, domain, power, {focus_hint(spec, f)}, cfg);
  IntegralEstimate out{0.0, 0.0, integral.n_samples, integral.seed};
  if (integral.value <= 0.0) return out;
  out.value = std::pow(integral.value, 1.0 / p);
  out.std_error = out.value / (p * integral.value) * integral.std_error;
  return out;
}

double ratio_dilation_exponent(const GroupSpec& spec, const KernelParams& kp, double r_exp, double s_exp) {
  const double q = spec.homogeneous_dimension();
  return kp.lambda + kp.weight_homogeneity() - 2.0 * q + q / r_exp + q / s_exp;
}

SteinWeissRatio stein_weiss_ratio(const GroupSpec& spec, const TrialFunction& f, const TrialFunction& g,
                                  const KernelParams& kp, double r_exp, double s_exp, const BallSpec& domain,
                                  const SamplerConfig& cfg) {
  if (!(r_exp > 1.0) || !(s_exp > 1.0)) throw Error(ErrorCode::invalid_argument, "exponents r, s must exceed 1");
  SteinWeissRatio out;
  out.norm_f = trial_lp_norm(spec, f, r_exp, domain, cfg.with_seed(cfg.seed ^ kNormFTag));
  out.norm_g = trial_lp_norm(spec, g, s_exp, domain, cfg.with_seed(cfg.seed ^ kNormGTag));
  for (const auto* nrm : {&out.norm_f, &out.norm_g}) {
    if (!(nrm->value > 3.0 * nrm->std_error) || nrm->value == 0.0) {
      throw Error(ErrorCode::zero_norm, "trial function norm is consistent with zero");
    }
  }
  out.bilinear = bilinear_form(spec, f, g, kp, domain, cfg);
  const double denom = out.norm_f.value * out.norm_g.value;
  const double b = std::abs(out.bilinear.value);
  out.ratio.value = b / denom;
  const double rel_f = out.norm_f.std_error / out.norm_f.value;
  const double rel_g = out.norm_g.std_error / out.norm_g.value;
  out.ratio.std_error = b == 0.0 ? out.bilinear.std_error / denom
                                 : out.ratio.value * std::sqrt(std::pow(out.bilinear.std_error / b, 2) +
                                                               rel_f * rel_f + rel_g * rel_g);
  out.ratio.n_samples = 3 * cfg.n_samples;
  out.ratio.seed = cfg.seed;
  return out;
}

}  // namespace carnot
