#include "carnot/best_constant.hpp"

#include <algorithm>
#include <cmath>

#include "carnot/detail/nelder_mead.hpp"
#include "carnot/error.hpp"
#include "carnot/random.hpp"

namespace carnot {

namespace {

constexpr double kLogRateLimit = 6.0;
constexpr std::uint64_t kCertifyTag = 0xC3A5C85C97CB3127ULL;
constexpr std::uint64_t kStartTag = 0x510E527FADE682D1ULL;

struct Decoded {
  TrialFunction f;
  TrialFunction g;
};

Decoded decode(const GroupSpec& spec, const std::vector<double>& x, const SearchConfig& cfg) {
  const auto r = static_cast<std::size_t>(spec.step());
  auto bump = [&](std::size_t base, double amplitude) {
    std::vector<double> decay(r);
    for (std::size_t j = 0; j < r; ++j) decay[j] = std::exp(std::clamp(x[base + j], -kLogRateLimit, kLogRateLimit));
    Point center = identity(spec);
    center.coords[0] = x[base + r];
    return TrialFunction::aniso_bump(spec, std::move(decay), std::move(center)).scaled(amplitude);
  };
  return {bump(0, cfg.amplitude_f), bump(r + 1, cfg.amplitude_g)};
}

}  // namespace

AdmissibilityReport admissibility_for(const GroupSpec& spec, const KernelParams& kp, double r_exp, double s_exp) {
  AdmissibilityParams p;
  p.r = r_exp;
  p.s = s_exp;
  p.lambda = kp.lambda;
  p.alpha = kp.alpha;
  p.beta = kp.beta;
  const double q = spec.homogeneous_dimension();
  if (kp.placement == WeightPlacement::full_norm) return check_admissible(TheoremId::T2_1, q, std::nullopt, p);
  if (kp.layer < 1 || kp.layer > spec.step()) throw Error(ErrorCode::invalid_argument, "layer out of range");
  p.layer = kp.layer;
  return check_admissible(TheoremId::T2_2, q, spec.layer_dim(kp.layer), p);
}

BestConstantResult estimate_best_constant(const GroupSpec& spec, const KernelParams& kp, double r_exp,
                                          double s_exp, const SearchConfig& search) {
  BestConstantResult result;
  result.admissibility = admissibility_for(spec, kp, r_exp, s_exp);
  if (!result.admissibility.pass) {
    std::string msg = "parameters fail";
    for (const auto& v : result.admissibility.violated) msg += " [" + v + "]";
    throw Error(ErrorCode::inadmissible_params, msg);
  }
  if (search.restarts == 0 || search.max_evals == 0 || search.eval_samples == 0) {
    throw Error(ErrorCode::invalid_argument, "search needs restarts, evaluations and samples >= 1");
  }
  if (!(search.amplitude_f > 0.0) || !(search.amplitude_g > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "trial amplitudes must be positive");
  }
  const auto r = static_cast<std::size_t>(spec.step());
  const auto domain = BallSpec::centered(spec, search.domain_radius);
  const bool weighted = kp.alpha != 0.0 || kp.beta != 0.0;

  SamplerConfig base;
  base.n_samples = search.eval_samples;
  base.workers = search.workers;

  double running = 0.0;
  for (unsigned k = 0; k < search.restarts; ++k) {
    StreamRng start(search.master_seed ^ kStartTag, k);
    std::vector<double> x0(2 * (r + 1), 0.0);
    for (std::size_t side = 0; side < 2; ++side) {
      const std::size_t b = side * (r + 1);
      for (std::size_t j = 0; j < r; ++j) x0[b + j] = k == 0 ? 0.0 : 2.0 * (start.uniform() - 0.5);
      x0[b + r] = (weighted ? 0.5 : 0.0) + (k == 0 ? 0.0 : start.uniform() - 0.5);
    }

    const SamplerConfig crn = base.with_seed(search.master_seed + 1000003ULL * (k + 1));
    std::size_t eval_index = 0;
    auto objective = [&](const std::vector<double>& x) {
      const auto fg = decode(spec, x, search);
      TraceRow row{k, eval_index++, false, x, 0.0, 0.0};
      try {
        const auto sw = stein_weiss_ratio(spec, fg.f, fg.g, kp, r_exp, s_exp, domain, crn);
        row.ratio = sw.ratio.value;
        row.std_error = sw.ratio.std_error;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::zero_norm) throw;
      }
      result.trace.push_back(row);
      return -row.ratio;
    };
    detail::NelderMeadOptions opt;
    opt.max_evals = search.max_evals;
    opt.initial_step = search.initial_step;
    const auto best = detail::nelder_mead(objective, x0, opt);

    const auto fg = decode(spec, best.x, search);
    const SamplerConfig fresh =
        base.with_seed((search.master_seed ^ kCertifyTag) + k).with_samples(4 * search.eval_samples);
    const auto cert = stein_weiss_ratio(spec, fg.f, fg.g, kp, r_exp, s_exp, domain, fresh);
    result.trace.push_back({k, eval_index, true, best.x, cert.ratio.value, cert.ratio.std_error});

    RestartSummary summary{k, -best.value, cert.ratio.value, cert.ratio.std_error, 0.0};
    if (cert.ratio.value > running) {
      running = cert.ratio.value;
      result.constant_lower_bound = cert.ratio.value;
      result.std_error = cert.ratio.std_error;
      result.best_f = fg.f;
      result.best_g = fg.g;
      result.best_params = best.x;
    }
    summary.best_so_far = running;
    result.restarts.push_back(summary);
  }
  return result;
}

}  // namespace carnot
