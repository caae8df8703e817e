#include "carnot/conditions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "carnot/error.hpp"
#include "carnot/special.hpp"

namespace carnot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogScaleSpread = 3.0;

void random_point(const GroupSpec& spec, StreamRng& rng, std::span<double> out) {
  const auto n = out.size();
  auto& tmp = [&]() -> std::vector<double>& {
    thread_local std::vector<double> buf;
    buf.resize(n);
    return buf;
  }();
  for (auto& x : tmp) x = 2.0 * rng.uniform() - 1.0;
  const double scale = std::exp(kLogScaleSpread * (2.0 * rng.uniform() - 1.0));
  dilate_into(spec, scale, tmp, out);
}

double exponent_window(double limit, double e) { return e > 0.0 ? limit / e : kInf; }

}  // namespace

TriangleEstimate estimate_triangle_constant(const GroupSpec& spec, std::uint64_t n_triples, std::uint64_t seed) {
  if (n_triples == 0) throw Error(ErrorCode::invalid_argument, "n_triples must be >= 1");
  const auto n = static_cast<std::size_t>(spec.dimension());
  StreamRng rng(seed, 0);
  std::vector<double> u1(n), u2(n), u3(n), scratch(2 * n);
  TriangleEstimate best;
  best.n_triples = n_triples;
  best.seed = seed;
  for (std::uint64_t i = 0; i < n_triples; ++i) {
    random_point(spec, rng, u1);
    random_point(spec, rng, u2);
    random_point(spec, rng, u3);
    // Half of the triples put u3 near u1 at a random relative scale.
    if (rng.uniform() < 0.5) {
      std::vector<double> w(u3);
      multiply_into(spec, u1, w, u3);
    }
    const double num = pseudo_distance(spec, u1, u2, scratch);
    const double den = pseudo_distance(spec, u1, u3, scratch) + pseudo_distance(spec, u3, u2, scratch);
    if (!(den > 0.0)) continue;
    const double ratio = num / den;
    if (ratio > best.value) {
      best.value = ratio;
      best.u1 = Point{u1};
      best.u2 = Point{u2};
      best.u3 = Point{u3};
    }
  }
  return best;
}

const TriangleEstimate& cached_triangle_constant(const GroupSpec& spec) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<TriangleEstimate>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[spec.fingerprint()];
  if (!slot) slot = std::make_unique<TriangleEstimate>(estimate_triangle_constant(spec, kTriangleTriples, kTriangleSeed));
  return *slot;
}

double phi_of_ball(double lambda, double k_g, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::domain_error, "φ(B) needs a positive radius");
  if (!(k_g >= 1.0)) throw Error(ErrorCode::domain_error, "φ(B) needs K_G >= 1");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::domain_error, "φ(B) needs λ >= 0");
  return std::pow(9.0, lambda) * std::pow(k_g, 4.0 * lambda) * std::pow(radius, -lambda);
}

std::vector<BallPair> default_ball_pairs(const GroupSpec& spec, const std::vector<double>& radii) {
  std::vector<BallPair> pairs;
  for (double r : radii) {
    for (double f : {0.5, 1.0, 2.0, 4.0}) {
      pairs.push_back({BallSpec::centered(spec, r), BallSpec::centered(spec, f * r)});
    }
  }
  return pairs;
}

Cond35Report check_condition_35(const GroupSpec& spec, double lambda, double epsilon,
                                const std::vector<BallPair>& pairs, double k_g) {
  const double q = spec.homogeneous_dimension();
  if (!(epsilon > 0.0 && epsilon < q - lambda)) {
    throw Error(ErrorCode::bad_epsilon, "ε must lie in (0, Q − λ)");
  }
  Cond35Report rep;
  rep.epsilon = epsilon;
  rep.bound = std::pow(4.0, q - lambda - epsilon);
  rep.pass = true;
  for (const auto& pr : pairs) {
    pr.outer.check(spec);
    pr.inner.check(spec);
    const double r = pr.outer.radius;
    const double rp = pr.inner.radius;
    const double d = pseudo_distance(spec, pr.outer.center, pr.inner.center);
    const bool contained = d == 0.0 ? rp <= 4.0 * r : k_g * (d + rp) <= 4.0 * r;
    if (!contained) throw Error(ErrorCode::invalid_argument, "ball pair not certified as B′ ⊆ 4B");
    Cond35Row row;
    row.r = r;
    row.r_prime = rp;
    row.lhs = std::pow(rp / r, q - epsilon) * phi_of_ball(lambda, k_g, rp) / phi_of_ball(lambda, k_g, r);
    row.simplified = std::pow(rp / r, q - lambda - epsilon);
    row.identity_residual = std::abs(row.lhs - row.simplified) / row.simplified;
    row.pass = row.lhs <= rep.bound * (1.0 + 1e-12) && row.identity_residual <= 1e-12;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

double TauWindow::pick(std::optional<double> requested) const {
  if (!(upper > lower)) throw Error(ErrorCode::bad_tau, "τ window is empty");
  if (requested) {
    if (!(*requested > lower && *requested < upper)) {
      throw Error(ErrorCode::bad_tau, "τ = " + std::to_string(*requested) + " lies outside its window");
    }
    return *requested;
  }
  return std::isfinite(upper) ? 0.5 * (lower + upper) : 2.0;
}

TauWindow tau_window(const GroupSpec& spec, const Cond36Config& cfg) {
  const double limit = cfg.placement == WeightPlacement::full_norm ? spec.homogeneous_dimension()
                                                                   : spec.layer_dim(cfg.layer);
  const double pp = cfg.p / (cfg.p - 1.0);
  TauWindow w;
  w.upper = std::min(exponent_window(limit, cfg.alpha * cfg.q), exponent_window(limit, cfg.beta * pp));
  return w;
}

Cond36Report check_condition_36(const GroupSpec& spec, const Cond36Config& cfg, double k_g) {
  if (!(cfg.p > 1.0) || !(cfg.q >= cfg.p)) throw Error(ErrorCode::invalid_argument, "condition needs 1 < p <= q");
  const double big_q = spec.homogeneous_dimension();
  if (!(cfg.lambda > 0.0 && cfg.lambda < big_q)) throw Error(ErrorCode::invalid_argument, "0 < λ < Q");
  const bool layered = cfg.placement == WeightPlacement::layer;
  if (layered && (cfg.layer < 1 || cfg.layer > spec.step())) {
    throw Error(ErrorCode::invalid_argument, "layer weights need 1 <= l <= step");
  }
  if (cfg.radii.empty()) throw Error(ErrorCode::invalid_argument, "radius list is empty");
  const double tau = tau_window(spec, cfg).pick(cfg.tau);
  const double pp = cfg.p / (cfg.p - 1.0);
  const double l = layered ? cfg.layer : 1.0;

  Cond36Report rep;
  rep.k_g = k_g;
  rep.tau = tau;
  rep.lambda_bar = big_q * (1.0 / cfg.q + 1.0 / pp);
  rep.exponent = rep.lambda_bar - cfg.lambda - l * (cfg.alpha + cfg.beta);

  const double a1 = -cfg.alpha * cfg.q * tau;  // exponent of w1^τ
  const double a2 = -cfg.beta * pp * tau;      // exponent of w2^{(1-p')τ}
  auto make_weight = [&](double e) {
    return layered ? WeightSpec::layer_power(cfg.layer, e) : WeightSpec::full_norm(e);
  };
  const WeightSpec w1 = make_weight(a1);
  const WeightSpec w2 = make_weight(a2);
  std::vector<Singularity> hints;
  for (const auto& w : {w1, w2}) {
    for (auto& h : singularities_of(spec, w)) hints.push_back(std::move(h));
  }

  const double b = 1.0 / (cfg.q * tau);
  const double c = 1.0 / (pp * tau);
  const double vol_exp = 1.0 / pp + 1.0 / cfg.q;
  const double unit_volume = unit_ball_volume(spec);
  const double m2_closed_unit =
      layered ? layer_weight_integral(LayerIntegralParams::of(spec, cfg.layer, -a1)) / unit_volume
              : big_q / (big_q + a1);

  for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
    const double radius = cfg.radii[i];
    const auto domain = BallSpec::centered(spec, radius);
    std::vector<Integrand> fs{Integrand{},
                              [&spec, w1](std::span<const double> u) { return w1(spec, u); },
                              [&spec, w2](std::span<const double> u) { return w2(spec, u); }};
    const auto est = mc_integrate_many(spec, domain, fs, hints, cfg.sampler.with_seed(cfg.sampler.seed + i));
    const double vol = est.values[0];
    const double i1 = est.values[1];
    const double i2 = est.values[2];

    Cond36Row row;
    row.radius = radius;
    row.phi = phi_of_ball(cfg.lambda, k_g, radius);
    row.volume = est.component(0);
    const auto stamp = [&](double value, const std::array<double, 3>& grad_log) {
      double var = 0.0;
      for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t y = 0; y < 3; ++y) var += grad_log[x] * grad_log[y] * est.cov(x, y);
      }
      return IntegralEstimate{value, std::abs(value) * std::sqrt(std::max(0.0, var)), est.n_samples, est.seed};
    };
    row.m1 = stamp(row.phi * std::pow(vol, vol_exp), {vol_exp / vol, 0.0, 0.0});
    row.m2 = stamp(std::pow(i1 / vol, b), {-b / vol, b / i1, 0.0});
    row.m3 = stamp(std::pow(i2 / vol, c), {-c / vol, 0.0, c / i2});
    row.product = stamp(row.m1.value * row.m2.value * row.m3.value, {(vol_exp - b - c) / vol, b / i1, c / i2});
    row.m2_closed = std::pow(m2_closed_unit * std::pow(radius, l * a1), b);
    row.m2_z = row.m2.z_score(row.m2_closed);
    rep.rows.push_back(row);
  }

  double sw = 0.0;
  double swx = 0.0;
  for (const auto& row : rep.rows) {
    const double w = 1.0 / std::max(row.product.std_error * row.product.std_error, 1e-300);
    sw += w;
    swx += w * row.product.value;
  }
  rep.weighted_mean = swx / sw;
  const double mean_var = 1.0 / sw;
  rep.pass = true;
  for (auto& row : rep.rows) {
    const double var = row.product.std_error * row.product.std_error - mean_var;
    const double gap = row.product.value - rep.weighted_mean;
    row.z_constancy = var > 0.0 ? gap / std::sqrt(var) : (gap == 0.0 ? 0.0 : kInf);
    rep.pass = rep.pass && std::abs(row.z_constancy) <= 3.0;
  }
  return rep;
}

SWConditionReport sw_conditions(const GroupSpec& spec, const Cond36Config& cfg, std::optional<double> epsilon) {
  SWConditionReport rep;
  rep.k_g = cached_triangle_constant(spec).value;
  const double q = spec.homogeneous_dimension();
  if (!(cfg.lambda > 0.0 && cfg.lambda < q)) throw Error(ErrorCode::invalid_argument, "0 < λ < Q");
  rep.epsilon = epsilon.value_or(0.5 * (q - cfg.lambda));
  rep.cond35 = check_condition_35(spec, cfg.lambda, rep.epsilon, default_ball_pairs(spec, cfg.radii), rep.k_g);
  rep.cond36 = check_condition_36(spec, cfg, rep.k_g);
  rep.tau = rep.cond36.tau;
  rep.lambda_bar = rep.cond36.lambda_bar;
  rep.cond35_pass = rep.cond35.pass;
  rep.cond36_pass = rep.cond36.pass;
  return rep;
}

}  // namespace carnot
