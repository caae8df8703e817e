#include "carnot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carnot/detail/proposal.hpp"
#include "carnot/detail/sampling.hpp"
#include "carnot/error.hpp"

namespace carnot {

namespace {

constexpr int kMaxResample = 10;
constexpr std::uint64_t kWarmup = 10000;
constexpr double kMinAcceptance = 1e-4;

// Distinct stream families for estimates that must be independent within one call.
constexpr std::uint64_t kSecondEstimateTag = 0xA5A5A5A55A5A5A5AULL;

}  // namespace

bool BallSpec::is_centered() const {
  return std::all_of(center.coords.begin(), center.coords.end(), [](double x) { return x == 0.0; });
}

void BallSpec::check(const GroupSpec& spec) const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::invalid_argument, "ball radius must be positive and finite");
  }
  if (center.size() != static_cast<std::size_t>(spec.dimension())) {
    throw Error(ErrorCode::invalid_argument, "ball centre does not match the group dimension");
  }
}

double WeightSpec::operator()(const GroupSpec& spec, std::span<const double> u) const {
  switch (kind) {
    case WeightKind::unweighted:
      return 1.0;
    case WeightKind::full_norm_power:
      return exponent == 0.0 ? 1.0 : std::pow(homogeneous_norm(spec, u), exponent);
    case WeightKind::layer_power:
      return exponent == 0.0 ? 1.0 : std::pow(layer_norm(spec, u, layer), exponent);
  }
  return 1.0;
}

void WeightSpec::check(const GroupSpec& spec) const {
  if (kind == WeightKind::layer_power && (layer < 1 || layer > spec.step())) {
    throw Error(ErrorCode::invalid_argument, "layer weight needs 1 <= layer <= step");
  }
  if (!std::isfinite(exponent)) throw Error(ErrorCode::invalid_argument, "weight exponent must be finite");
}

double IntegralEstimate::z_score(double expected) const {
  const double gap = value - expected;
  if (std_error == 0.0) {
    if (std::abs(gap) <= 1e-12 * std::max(1.0, std::abs(expected))) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), gap);
  }
  return gap / std_error;
}

IntegralEstimate VectorEstimate::component(std::size_t i) const {
  return {values[i], std::sqrt(std::max(0.0, cov(i, i))), n_samples, seed};
}

std::vector<Singularity> singularities_of(const GroupSpec& spec, const WeightSpec& weight) {
  if (!(weight.exponent < 0.0)) return {};
  switch (weight.kind) {
    case WeightKind::unweighted:
      return {};
    case WeightKind::full_norm_power:
      return {Singularity::at_point(identity(spec), -weight.exponent)};
    case WeightKind::layer_power:
      return {Singularity::on_layer(weight.layer, -weight.exponent)};
  }
  return {};
}

BallSample sample_ball(const GroupSpec& spec, const BallSpec& ball, const SamplerConfig& cfg) {
  ball.check(spec);
  const auto n = static_cast<std::size_t>(spec.dimension());
  detail::MixtureProposal box(spec, ball, {}, false);
  UniformSource src(cfg.scheme, cfg.seed, 0, box.dim(), 0);
  BallSample out;
  std::vector<double> v(n);
  std::uint64_t tried = 0;
  while (out.points.size() < cfg.n_samples) {
    src.next_point();
    box.sample(src, 0, v);
    ++tried;
    if (box.in_domain(v)) out.points.emplace_back(v);
    if (tried == kWarmup &&
        static_cast<double>(out.points.size()) < kMinAcceptance * static_cast<double>(tried)) {
      throw Error(ErrorCode::degenerate_sampler,
                  "acceptance rate below 1e-4 after " + std::to_string(kWarmup) + " proposals");
    }
  }
  out.proposals = tried;
  out.acceptance_rate = static_cast<double>(out.points.size()) / static_cast<double>(tried);
  return out;
}

VectorEstimate mc_integrate_many(const GroupSpec& spec, const BallSpec& domain,
                                 const std::vector<Integrand>& integrands, const std::vector<Singularity>& hints,
                                 const SamplerConfig& cfg) {
  domain.check(spec);
  if (cfg.n_samples < 1) throw Error(ErrorCode::invalid_argument, "n_samples must be >= 1");
  const auto n = static_cast<std::size_t>(spec.dimension());
  const std::size_t k = integrands.size();
  const detail::MixtureProposal prototype(spec, domain, hints, cfg.stratify_singularity);

  auto make_sampler = [&] {
    return [proposal = prototype, &integrands, n, k, v = std::vector<double>(n)](
               UniformSource& src, std::span<double> out) mutable {
      for (int attempt = 0;; ++attempt) {
        proposal.sample(src, 0, v);
        if (!proposal.in_domain(v)) {
          std::fill(out.begin(), out.end(), 0.0);
          return;
        }
        const double q = proposal.density(v);
        bool finite = std::isfinite(q) && q > 0.0;
        for (std::size_t i = 0; i < k && finite; ++i) {
          const double h = integrands[i] ? integrands[i](v) : 1.0;
          out[i] = h / q;
          finite = std::isfinite(out[i]);
        }
        if (finite) return;
        if (attempt >= kMaxResample) {
          throw Error(ErrorCode::non_finite_sample, "integrand is non-finite on more than 10 consecutive draws");
        }
        // Landed on the singular set: redraw from the next point of the stream.
        src.next_point();
      }
    };
  };

  auto acc = detail::run_sampling(cfg, prototype.dim(), k, make_sampler);
  VectorEstimate est;
  est.values = acc.mean();
  est.covariance = acc.mean_covariance();
  est.n_samples = cfg.n_samples;
  est.seed = cfg.seed;
  return est;
}

IntegralEstimate mc_integrate(const GroupSpec& spec, const BallSpec& domain, const Integrand& integrand,
                              const std::vector<Singularity>& hints, const SamplerConfig& cfg) {
  return mc_integrate_many(spec, domain, {integrand}, hints, cfg).component(0);
}

IntegralEstimate mc_integrate(const GroupSpec& spec, const BallSpec& domain, const Integrand& integrand,
                              const WeightSpec& weight, const SamplerConfig& cfg) {
  weight.check(spec);
  if (weight.kind == WeightKind::unweighted || weight.exponent == 0.0) {
    return mc_integrate(spec, domain, integrand, std::vector<Singularity>{}, cfg);
  }
  Integrand weighted = [&spec, &integrand, weight](std::span<const double> u) {
    const double w = weight(spec, u);
    if (!std::isfinite(w)) return w;
    const double f = integrand ? integrand(u) : 1.0;
    return f == 0.0 ? 0.0 : f * w;
  };
  return mc_integrate(spec, domain, weighted, singularities_of(spec, weight), cfg);
}

IntegralEstimate weighted_lp_norm(const GroupSpec& spec, const Integrand& f, double p, const WeightSpec& weight,
                                  const BallSpec& domain, const SamplerConfig& cfg) {
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_argument, "L^p norm needs p >= 1");
  Integrand power = [&f, p](std::span<const double> u) {
    const double x = std::abs(f(u));
    return x == 0.0 ? 0.0 : std::pow(x, p);
  };
  const auto integral = mc_integrate(spec, domain, power, weight, cfg);
  IntegralEstimate out{0.0, 0.0, integral.n_samples, integral.seed};
  if (integral.value <= 0.0) return out;
  out.value = std::pow(integral.value, 1.0 / p);
  out.std_error = out.value / (p * integral.value) * integral.std_error;
  return out;
}

IntegralEstimate ball_volume(const GroupSpec& spec, const BallSpec& ball, const SamplerConfig& cfg) {
  return mc_integrate(spec, ball, Integrand{}, std::vector<Singularity>{}, cfg);
}

IntegralEstimate ratio_of(const IntegralEstimate& a, const IntegralEstimate& b) {
  if (b.value == 0.0) throw Error(ErrorCode::domain_error, "ratio with a zero denominator estimate");
  const double r = a.value / b.value;
  const double ra = a.value == 0.0 ? 0.0 : a.std_error / a.value;
  const double rb = b.std_error / b.value;
  const double se = a.value == 0.0 ? a.std_error / std::abs(b.value) : std::abs(r) * std::hypot(ra, rb);
  return {r, se, a.n_samples + b.n_samples, a.seed};
}

IntegralEstimate haar_scaling_check(const GroupSpec& spec, double t, const SamplerConfig& cfg) {
  if (!(t > 0.0)) throw Error(ErrorCode::invalid_scale, "dilation parameter must be positive");
  const auto scaled = ball_volume(spec, BallSpec::centered(spec, t), cfg);
  const auto unit = ball_volume(spec, BallSpec::centered(spec, 1.0), cfg.with_seed(cfg.seed ^ kSecondEstimateTag));
  auto r = ratio_of(scaled, unit);
  r.seed = cfg.seed;
  return r;
}

IntegralEstimate doubling_ratio(const GroupSpec& spec, const WeightSpec& weight, double tau, double radius,
                                const SamplerConfig& cfg) {
  weight.check(spec);
  if (!(tau >= 1.0)) throw Error(ErrorCode::invalid_argument, "doubling check needs tau >= 1");
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be positive");
  const double a = weight.exponent * tau;
  if (weight.kind == WeightKind::full_norm_power && !(a > -spec.homogeneous_dimension())) {
    throw Error(ErrorCode::non_integrable_weight, "|u|^a needs a > -Q");
  }
  if (weight.kind == WeightKind::layer_power && !(a > -spec.layer_dim(weight.layer))) {
    throw Error(ErrorCode::non_integrable_weight, "|z_l|^a needs a > -m_l");
  }
  const auto w = weight.pow(tau);
  const auto big = mc_integrate(spec, BallSpec::centered(spec, 2.0 * radius), Integrand{}, w, cfg);
  const auto small = mc_integrate(spec, BallSpec::centered(spec, radius), Integrand{}, w,
                                  cfg.with_seed(cfg.seed ^ kSecondEstimateTag));
  auto r = ratio_of(big, small);
  r.seed = cfg.seed;
  return r;
}

}  // namespace carnot
