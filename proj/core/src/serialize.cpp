#include "carnot/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "carnot/error.hpp"

namespace carnot {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw Error(ErrorCode::parse_error, "expected a number");
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

std::vector<double> doubles(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from(x));
  return out;
}

Json ball_json(const BallSpec& b) { return Json{{"center", numbers(b.center.coords)}, {"radius", number(b.radius)}}; }

}  // namespace

Json to_json(const GroupSpec& spec) {
  Json j;
  j["name"] = spec.name();
  j["step"] = spec.step();
  j["dimension"] = spec.dimension();
  j["homogeneous_dimension"] = spec.homogeneous_dimension();
  j["layer_dims"] = spec.layer_dims();
  return j;
}

Json to_json(const IntegralEstimate& e) {
  return Json{{"value", number(e.value)},
              {"std_error", number(e.std_error)},
              {"n_samples", e.n_samples},
              {"seed", e.seed}};
}

Json to_json(const Point& p) { return numbers(p.coords); }

Json to_json(const TrialFunction& f) {
  Json j;
  j["kind"] = std::string(f.kind_name());
  Json params;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnisoBump>) {
          params["decay"] = numbers(p.decay);
          params["center"] = numbers(p.center.coords);
        } else if constexpr (std::is_same_v<T, BallIndicator>) {
          params = ball_json(p.ball);
        } else {
          params["lower"] = numbers(p.lower);
          params["upper"] = numbers(p.upper);
          params["shape"] = p.shape;
          params["origin"] = numbers(p.origin.coords);
          params["values"] = numbers(p.values);
        }
      },
      f.params());
  params["amplitude"] = number(f.amplitude());
  j["params"] = std::move(params);
  return j;
}

TrialFunction trial_from_json(const GroupSpec& spec, const Json& j, const std::filesystem::path& base_dir) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    const auto& p = j.at("params");
    const double amplitude = p.contains("amplitude") ? number_from(p["amplitude"]) : 1.0;
    auto point = [&](const char* key) { return p.contains(key) ? Point{doubles(p[key])} : identity(spec); };
    TrialFunction f;
    if (kind == "aniso_bump") {
      f = TrialFunction::aniso_bump(spec, doubles(p.at("decay")), point("center"));
    } else if (kind == "ball_indicator") {
      f = TrialFunction::ball_indicator(spec, BallSpec{point("center"), number_from(p.at("radius"))});
    } else if (kind == "tabulated") {
      TabulatedGrid g;
      if (p.contains("file")) {
        auto path = std::filesystem::path(p["file"].get<std::string>());
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        g = load_grid(path);
      } else {
        g.lower = doubles(p.at("lower"));
        g.upper = doubles(p.at("upper"));
        g.shape = p.at("shape").get<std::vector<std::size_t>>();
        g.values = doubles(p.at("values"));
      }
      g.origin = point("origin");
      f = TrialFunction::tabulated(spec, std::move(g));
    } else {
      throw Error(ErrorCode::parse_error, "unknown trial function kind '" + kind + "'");
    }
    return f.scaled(amplitude);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("trial function: ") + e.what());
  }
}

Json to_json(const AdmissibilityReport& r) {
  Json j;
  j["theorem"] = std::string(to_string(r.theorem));
  j["pass"] = r.pass;
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    conds.push_back(Json{{"name", c.name}, {"holds", c.holds}, {"lhs", number(c.lhs)}, {"rhs", number(c.rhs)}});
  }
  j["conditions"] = std::move(conds);
  j["violated"] = r.violated;
  Json derived = Json::object();
  for (const auto& [k, v] : r.derived) derived[k] = number(v);
  j["derived"] = std::move(derived);
  j["notes"] = r.notes;
  return j;
}

Json to_json(const TriangleEstimate& t) {
  Json j{{"value", number(t.value)}, {"n_triples", t.n_triples}, {"seed", t.seed}};
  if (!t.u1.coords.empty()) j["extremal_triple"] = Json::array({to_json(t.u1), to_json(t.u2), to_json(t.u3)});
  return j;
}

Json to_json(const Cond35Report& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"r", number(row.r)},
                        {"r_prime", number(row.r_prime)},
                        {"lhs", number(row.lhs)},
                        {"simplified", number(row.simplified)},
                        {"identity_residual", number(row.identity_residual)},
                        {"pass", row.pass}});
  }
  return Json{{"epsilon", number(r.epsilon)}, {"bound", number(r.bound)}, {"pass", r.pass}, {"rows", rows}};
}

Json to_json(const Cond36Report& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"radius", number(row.radius)},
                        {"phi", number(row.phi)},
                        {"volume", to_json(row.volume)},
                        {"M1", to_json(row.m1)},
                        {"M2", to_json(row.m2)},
                        {"M3", to_json(row.m3)},
                        {"product", to_json(row.product)},
                        {"M2_closed_form", number(row.m2_closed)},
                        {"M2_z", number(row.m2_z)},
                        {"z_constancy", number(row.z_constancy)}});
  }
  return Json{{"K_G", number(r.k_g)},
              {"tau", number(r.tau)},
              {"lambda_bar", number(r.lambda_bar)},
              {"exponent", number(r.exponent)},
              {"weighted_mean", number(r.weighted_mean)},
              {"pass", r.pass},
              {"rows", rows}};
}

Json to_json(const SWConditionReport& r) {
  return Json{{"K_G", number(r.k_g)},
              {"epsilon", number(r.epsilon)},
              {"tau", number(r.tau)},
              {"lambda_bar", number(r.lambda_bar)},
              {"cond35_pass", r.cond35_pass},
              {"cond36_pass", r.cond36_pass},
              {"cond35", to_json(r.cond35)},
              {"cond36", to_json(r.cond36)}};
}

Json to_json(const BestConstantResult& r) {
  Json restarts = Json::array();
  for (const auto& s : r.restarts) {
    restarts.push_back(Json{{"restart", s.restart},
                            {"search_ratio", number(s.search_ratio)},
                            {"certified_ratio", number(s.certified_ratio)},
                            {"certified_error", number(s.certified_error)},
                            {"best_so_far", number(s.best_so_far)}});
  }
  Json trace = Json::array();
  for (const auto& t : r.trace) {
    trace.push_back(Json{{"restart", t.restart},
                         {"eval", t.eval},
                         {"certification", t.certification},
                         {"params", numbers(t.params)},
                         {"ratio", number(t.ratio)},
                         {"std_error", number(t.std_error)}});
  }
  return Json{{"constant_lower_bound", number(r.constant_lower_bound)},
              {"std_error", number(r.std_error)},
              {"best_params", numbers(r.best_params)},
              {"best_f", to_json(r.best_f)},
              {"best_g", to_json(r.best_g)},
              {"admissibility", to_json(r.admissibility)},
              {"restarts", restarts},
              {"trace", trace}};
}

}  // namespace carnot
