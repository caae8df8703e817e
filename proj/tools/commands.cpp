#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "carnot/admissibility.hpp"
#include "carnot/best_constant.hpp"
#include "carnot/conditions.hpp"
#include "carnot/error.hpp"
#include "carnot/group_io.hpp"
#include "carnot/serialize.hpp"
#include "carnot/special.hpp"

namespace carnot::cli {

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::non_finite_sample:
    case ErrorCode::degenerate_sampler:
    case ErrorCode::zero_norm:
      return kNumericFailure;
    default:
      return kConfigError;
  }
}

SamplerConfig sampler_for(const RunConfig& rc, std::uint64_t default_samples) {
  SamplerConfig cfg;
  cfg.seed = rc.seed;
  cfg.n_samples = rc.samples.value_or(default_samples);
  cfg.workers = rc.workers;
  cfg.scheme = rc.low_discrepancy ? SamplingScheme::low_discrepancy : SamplingScheme::pseudo_random;
  return cfg;
}

Json config_json(const RunConfig& rc, std::uint64_t n_samples) {
  return Json{{"group", rc.group},
              {"seed", rc.seed},
              {"n_samples", n_samples},
              {"scheme", rc.low_discrepancy ? "low_discrepancy" : "pseudo_random"}};
}

Json envelope(const char* command, Json config, Json result, bool pass) {
  return Json{{"command", command}, {"config", std::move(config)}, {"verdict", pass ? "pass" : "fail"},
              {"result", std::move(result)}};
}

void emit(const RunConfig& rc, const Json& json, const std::string& csv, std::ostream& out) {
  const std::string text = rc.format == Format::json ? json.dump(2) + "\n" : csv;
  if (rc.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(rc.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + rc.out);
  file << text;
}

std::string fmt(double x) { return format_double(x); }

KernelParams kernel_from(const GroupSpec& spec, const WeightOptions& w) {
  KernelParams kp;
  kp.lambda = w.lambda;
  kp.alpha = w.alpha;
  kp.beta = w.beta;
  if (w.weight == "layer") {
    if (!w.layer) throw ConfigError("layer weights need --layer");
    kp.placement = WeightPlacement::layer;
    kp.layer = *w.layer;
  } else if (w.weight != "full") {
    throw ConfigError("--weight must be 'full' or 'layer'");
  }
  kp.check(spec);
  return kp;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << (exit_code_for(e.code()) == kConfigError ? "config error: " : "numeric failure: ") << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace

int cmd_group_info(const RunConfig& rc, const GroupInfoOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto spec = resolve_group(rc.group);
    const auto violations = validate_group_spec(spec);
    const auto tri = estimate_triangle_constant(spec, opt.triples, rc.seed);
    Json viol = Json::array();
    for (const auto& v : violations) viol.push_back(Json{{"kind", to_string(v.kind)}, {"message", v.message}});
    Json result = to_json(spec);
    result["valid"] = violations.empty();
    result["violations"] = viol;
    result["triangle_constant"] = to_json(tri);

    std::ostringstream csv;
    std::string dims;
    for (int m : spec.layer_dims()) dims += (dims.empty() ? "" : ";") + std::to_string(m);
    csv << "key,value\n"
        << "name," << spec.name() << "\n"
        << "dimension," << spec.dimension() << "\n"
        << "homogeneous_dimension," << spec.homogeneous_dimension() << "\n"
        << "step," << spec.step() << "\n"
        << "layer_dims," << dims << "\n"
        << "valid," << (violations.empty() ? "true" : "false") << "\n"
        << "K_G," << fmt(tri.value) << "\n"
        << "n_triples," << tri.n_triples << "\n"
        << "seed," << rc.seed << "\n";
    Json cfg{{"group", rc.group}, {"seed", rc.seed}, {"n_triples", opt.triples}};
    emit(rc, envelope("group-info", cfg, result, violations.empty()), csv.str(), out);
    return violations.empty() ? kPass : kConfigError;
  });
}

int cmd_verify_lemma44(const RunConfig& rc, const Lemma44Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto spec = resolve_group(rc.group);
    const auto cfg = sampler_for(rc, Defaults::samples);
    std::vector<int> layers;
    if (opt.layer) {
      if (*opt.layer < 1 || *opt.layer > spec.step()) throw ConfigError("--layer must lie in [1, step]");
      layers.push_back(*opt.layer);
    } else {
      for (int l = 1; l <= spec.step(); ++l) layers.push_back(l);
    }
    struct Job {
      int layer;
      double gamma;
    };
    std::vector<Job> jobs;
    for (int l : layers) {
      const double m = spec.layer_dim(l);
      const auto& grid = opt.gammas.empty() ? opt.gamma_fractions : opt.gammas;
      for (double g : grid) {
        const double gamma = opt.gammas.empty() ? g * m : g;
        if (!(gamma < m)) throw ConfigError("γ = " + fmt(gamma) + " is not below m_l = " + fmt(m));
        jobs.push_back({l, gamma});
      }
    }
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "layer,gamma,closed_form,oracle,std_error,z_score,pass,seed,n_samples\n";
    bool all = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto [l, gamma] = jobs[i];
      const double closed = layer_weight_integral(LayerIntegralParams::of(spec, l, gamma));
      const auto est = layer_weight_integral_oracle(spec, l, gamma, cfg.with_seed(rc.seed + i));
      const double z = est.z_score(closed);
      const bool pass = std::abs(z) <= 3.0;
      all = all && pass;
      rows.push_back(Json{{"layer", l},
                          {"gamma", number(gamma)},
                          {"closed_form", number(closed)},
                          {"oracle", number(est.value)},
                          {"std_error", number(est.std_error)},
                          {"z_score", number(z)},
                          {"pass", pass},
                          {"seed", est.seed}});
      csv << l << ',' << fmt(gamma) << ',' << fmt(closed) << ',' << fmt(est.value) << ',' << fmt(est.std_error) << ','
          << fmt(z) << ',' << (pass ? "true" : "false") << ',' << est.seed << ',' << cfg.n_samples << "\n";
    }
    emit(rc, envelope("verify-lemma44", config_json(rc, cfg.n_samples), Json{{"rows", rows}}, all), csv.str(), out);
    return all ? kPass : kNumericFailure;
  });
}

int cmd_check_admissible(const RunConfig& rc, const AdmissibleOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto spec = resolve_group(rc.group);
    const auto id = parse_theorem_id(opt.theorem);
    if (!id) throw ConfigError("unknown theorem '" + opt.theorem + "' (use T2.1, T2.2, T3.1 or T4.1)");
    AdmissibilityParams p;
    p.r = opt.r;
    p.s = opt.s;
    p.p = opt.p;
    p.q = opt.q;
    p.lambda = opt.w.lambda;
    p.alpha = opt.w.alpha;
    p.beta = opt.w.beta;
    std::optional<double> m_l;
    if (needs_layer(*id)) {
      if (!opt.w.layer) throw ConfigError(std::string(to_string(*id)) + " needs --layer");
      if (*opt.w.layer < 1 || *opt.w.layer > spec.step()) throw ConfigError("--layer must lie in [1, step]");
      p.layer = opt.w.layer;
      m_l = spec.layer_dim(*opt.w.layer);
    }
    const auto rep = check_admissible(*id, spec.homogeneous_dimension(), m_l, p);
    std::ostringstream csv;
    csv << "theorem,item,holds,lhs,rhs\n";
    for (const auto& c : rep.conditions) {
      csv << to_string(rep.theorem) << ",\"" << c.name << "\"," << (c.holds ? "true" : "false") << ',' << fmt(c.lhs)
          << ',' << fmt(c.rhs) << "\n";
    }
    for (const auto& [k, v] : rep.derived) csv << to_string(rep.theorem) << ",derived:" << k << ",," << fmt(v) << ",\n";
    Json cfg{{"group", rc.group}, {"theorem", std::string(to_string(*id))}};
    emit(rc, envelope("check-admissible", cfg, to_json(rep), rep.pass), csv.str(), out);
    return rep.pass ? kPass : kNumericFailure;
  });
}

int cmd_sw_conditions(const RunConfig& rc, const SwOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto spec = resolve_group(rc.group);
    const double big_q = spec.homogeneous_dimension();
    if (!(opt.w.lambda > 0.0 && opt.w.lambda < big_q)) throw ConfigError("0 < λ < Q violated");
    const auto kp = kernel_from(spec, opt.w);
    Cond36Config c;
    c.placement = kp.placement;
    c.layer = kp.layer;
    c.lambda = kp.lambda;
    c.alpha = kp.alpha;
    c.beta = kp.beta;
    c.p = opt.p;
    c.q = opt.q;
    c.tau = opt.tau;
    c.radii = opt.radii;
    c.sampler = sampler_for(rc, Defaults::samples);
    const auto rep = sw_conditions(spec, c, opt.epsilon);
    const bool pass = rep.cond35_pass && rep.cond36_pass;

    std::ostringstream csv;
    csv << "radius,phi,volume,M1,M1_se,M2,M2_se,M3,M3_se,product,product_se,M2_closed_form,M2_z,z_constancy,seed,"
           "n_samples\n";
    for (const auto& row : rep.cond36.rows) {
      csv << fmt(row.radius) << ',' << fmt(row.phi) << ',' << fmt(row.volume.value) << ',' << fmt(row.m1.value) << ','
          << fmt(row.m1.std_error) << ',' << fmt(row.m2.value) << ',' << fmt(row.m2.std_error) << ','
          << fmt(row.m3.value) << ',' << fmt(row.m3.std_error) << ',' << fmt(row.product.value) << ','
          << fmt(row.product.std_error) << ',' << fmt(row.m2_closed) << ',' << fmt(row.m2_z) << ','
          << fmt(row.z_constancy) << ',' << row.volume.seed << ',' << c.sampler.n_samples << "\n";
    }
    emit(rc, envelope("sw-conditions", config_json(rc, c.sampler.n_samples), to_json(rep), pass), csv.str(), out);
    return pass ? kPass : kNumericFailure;
  });
}

int cmd_estimate_constant(const RunConfig& rc, const ConstantOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto spec = resolve_group(rc.group);
    const auto kp = kernel_from(spec, opt.w);
    const auto adm = admissibility_for(spec, kp, opt.r, opt.s);
    const std::uint64_t n = rc.samples.value_or(Defaults::search_samples);
    Json cfg = config_json(rc, n);
    if (!adm.pass) {
      err << "config error: parameters are not admissible\n";
      emit(rc, envelope("estimate-constant", cfg, Json{{"admissibility", to_json(adm)}}, false),
           "theorem,violated\n" + std::string(to_string(adm.theorem)) + ",\"" +
               (adm.violated.empty() ? std::string() : adm.violated.front()) + "\"\n",
           out);
      return kConfigError;
    }
    SearchConfig sc;
    sc.restarts = opt.restarts;
    sc.max_evals = opt.max_evals;
    sc.eval_samples = n;
    sc.master_seed = rc.seed;
    sc.domain_radius = opt.radius;
    sc.workers = rc.workers;
    const auto res = estimate_best_constant(spec, kp, opt.r, opt.s, sc);

    std::ostringstream csv;
    const std::size_t np = res.trace.empty() ? 0 : res.trace.front().params.size();
    csv << "restart,eval,certification,ratio,std_error";
    for (std::size_t i = 0; i < np; ++i) csv << ",x" << i;
    csv << ",seed,n_samples\n";
    for (const auto& t : res.trace) {
      csv << t.restart << ',' << t.eval << ',' << (t.certification ? "true" : "false") << ',' << fmt(t.ratio) << ','
          << fmt(t.std_error);
      for (double x : t.params) csv << ',' << fmt(x);
      csv << ',' << rc.seed << ',' << (t.certification ? 4 * n : n) << "\n";
    }
    emit(rc, envelope("estimate-constant", cfg, to_json(res), true), csv.str(), out);
    return kPass;
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Carnot-group operator and inequality verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "carnot 0.3.0");

  RunConfig rc;
  std::string format = "json";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--group", rc.group, "built-in name (R<m>, H<n>, free2-<g>) or group spec JSON file")
        ->capture_default_str();
    sub->add_option("--seed", rc.seed, "master seed")->capture_default_str();
    sub->add_option("--samples", rc.samples, "samples per estimate");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--out", rc.out, "write output to this file instead of stdout");
    sub->add_option("--workers", rc.workers, "worker threads (0 = all cores); results do not depend on it");
    sub->add_flag("--low-discrepancy", rc.low_discrepancy, "scrambled Sobol points instead of pseudo-random");
  };
  auto add_weight = [](CLI::App* sub, WeightOptions& w) {
    sub->add_option("--lambda", w.lambda, "kernel exponent λ")->capture_default_str();
    sub->add_option("--alpha", w.alpha, "weight exponent α")->capture_default_str();
    sub->add_option("--beta", w.beta, "weight exponent β")->capture_default_str();
    sub->add_option("--weight", w.weight, "full | layer")->capture_default_str();
    sub->add_option("--layer", w.layer, "layer l for layer weights");
  };

  GroupInfoOptions gi;
  auto* s_info = app.add_subcommand("group-info", "dimensions, validation verdict and triangle constant");
  add_common(s_info);
  s_info->add_option("--triples", gi.triples, "random triples for K_G")->capture_default_str();

  Lemma44Options l44;
  auto* s_l44 = app.add_subcommand("verify-lemma44", "closed-form layer-weight integrals against sampling");
  add_common(s_l44);
  s_l44->add_option("--gamma-fractions", l44.gamma_fractions, "γ as fractions of m_l")->delimiter(',');
  s_l44->add_option("--gamma", l44.gammas, "absolute γ values (override the fractions)")->delimiter(',');
  s_l44->add_option("--layer", l44.layer, "restrict to one layer");

  AdmissibleOptions adm;
  auto* s_adm = app.add_subcommand("check-admissible", "hypotheses of one theorem regime");
  add_common(s_adm);
  s_adm->add_option("--theorem", adm.theorem, "T2.1 | T2.2 | T3.1 | T4.1")->capture_default_str();
  s_adm->add_option("--r", adm.r)->capture_default_str();
  s_adm->add_option("--s", adm.s)->capture_default_str();
  s_adm->add_option("--p", adm.p)->capture_default_str();
  s_adm->add_option("--q", adm.q)->capture_default_str();
  add_weight(s_adm, adm.w);

  SwOptions sw;
  auto* s_sw = app.add_subcommand("sw-conditions", "ball-pair and averaged-weight conditions over a radius grid");
  add_common(s_sw);
  add_weight(s_sw, sw.w);
  s_sw->add_option("--p", sw.p)->capture_default_str();
  s_sw->add_option("--q", sw.q)->capture_default_str();
  s_sw->add_option("--tau", sw.tau, "τ (default: midpoint of its window, 2 if unbounded)");
  s_sw->add_option("--epsilon", sw.epsilon, "ε (default: (Q − λ)/2)");
  s_sw->add_option("--radii", sw.radii, "ball radii")->delimiter(',');

  ConstantOptions bc;
  auto* s_bc = app.add_subcommand("estimate-constant", "search for a lower bound on the best constant");
  add_common(s_bc);
  add_weight(s_bc, bc.w);
  s_bc->add_option("--r", bc.r)->capture_default_str();
  s_bc->add_option("--s", bc.s)->capture_default_str();
  s_bc->add_option("--restarts", bc.restarts)->capture_default_str();
  s_bc->add_option("--max-evals", bc.max_evals, "ratio evaluations per restart")->capture_default_str();
  s_bc->add_option("--radius", bc.radius, "truncation radius")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }
  rc.format = format == "csv" ? Format::csv : Format::json;

  try {
    if (s_info->parsed()) return cmd_group_info(rc, gi, out, err);
    if (s_l44->parsed()) return cmd_verify_lemma44(rc, l44, out, err);
    if (s_adm->parsed()) return cmd_check_admissible(rc, adm, out, err);
    if (s_sw->parsed()) return cmd_sw_conditions(rc, sw, out, err);
    if (s_bc->parsed()) return cmd_estimate_constant(rc, bc, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace carnot::cli
