#include "carnot/admissibility.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "carnot/error.hpp"

namespace carnot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Builder {
 public:
  explicit Builder(AdmissibilityReport& r) : report_(r) {}

  void less(std::string name, double lhs, double rhs) { add(std::move(name), lhs < rhs, lhs, rhs); }
  void less_eq(std::string name, double lhs, double rhs) { add(std::move(name), lhs <= rhs, lhs, rhs); }
  void equal(std::string name, double lhs, double rhs) {
    add(std::move(name), std::abs(lhs - rhs) <= kBalanceTolerance, lhs, rhs);
  }
  void add(std::string name, bool holds, double lhs, double rhs) {
    if (!holds) report_.violated.push_back(name);
    report_.conditions.push_back({std::move(name), holds, lhs, rhs});
  }

 private:
  AdmissibilityReport& report_;
};

}  // namespace

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T2_1: return "T2.1";
    case TheoremId::T2_2: return "T2.2";
    case TheoremId::T3_1: return "T3.1";
    case TheoremId::T4_1: return "T4.1";
  }
  return "?";
}

std::optional<TheoremId> parse_theorem_id(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) key.push_back(c);
  }
  if (key == "21") return TheoremId::T2_1;
  if (key == "22") return TheoremId::T2_2;
  if (key == "31") return TheoremId::T3_1;
  if (key == "41") return TheoremId::T4_1;
  return std::nullopt;
}

bool needs_layer(TheoremId id) { return id == TheoremId::T2_2 || id == TheoremId::T4_1; }

double conjugate_exponent(double x) { return x == 1.0 ? kInf : x / (x - 1.0); }

AdmissibilityReport check_admissible(TheoremId theorem, double Q, std::optional<double> m_l,
                                     const AdmissibilityParams& pr) {
  AdmissibilityReport rep;
  rep.theorem = theorem;
  Builder b(rep);
  const bool layered = needs_layer(theorem);
  double l = 1.0;
  double m = 0.0;
  if (layered) {
    if (!m_l || !pr.layer) throw Error(ErrorCode::invalid_argument, std::string(to_string(theorem)) + " needs l and m_l");
    l = *pr.layer;
    m = *m_l;
    if (!(l >= 1.0) || !(m >= 1.0)) throw Error(ErrorCode::invalid_argument, "l and m_l must be >= 1");
    rep.derived["l"] = l;
    rep.derived["m_l"] = m;
  }
  rep.derived["Q"] = Q;
  const double a = pr.alpha;
  const double bt = pr.beta;
  const double lam = pr.lambda;
  const double weight_sum = layered ? l * (a + bt) : a + bt;

  auto layer_bound = [&] {
    const double denom = Q - l * m;
    double bound = kInf;
    if (denom > 0.0) {
      bound = m * lam / denom;
    } else {
      rep.notes.push_back("Q = l·m_l: the bound m_l λ/(Q − l m_l) is taken as +∞");
    }
    rep.derived["alpha_beta_bound"] = bound;
    return bound;
  };

  switch (theorem) {
    case TheoremId::T2_1:
    case TheoremId::T2_2: {
      const double rp = conjugate_exponent(pr.r);
      const double sp = conjugate_exponent(pr.s);
      rep.derived["r_prime"] = rp;
      rep.derived["s_prime"] = sp;
      b.add("1 < r < ∞", pr.r > 1.0 && std::isfinite(pr.r), pr.r, 1.0);
      b.add("1 < s < ∞", pr.s > 1.0 && std::isfinite(pr.s), pr.s, 1.0);
      b.add("0 < λ < Q", lam > 0.0 && lam < Q, lam, Q);
      b.less_eq("α+β ≥ 0", 0.0, a + bt);
      const double lhs = 1.0 / pr.r + 1.0 / pr.s + (lam + weight_sum) / Q;
      rep.derived["balance_residual"] = lhs - 2.0;
      if (theorem == TheoremId::T2_1) {
        b.less_eq("λ+α+β ≤ Q", lam + a + bt, Q);
        b.less("α < Q/r′", a, Q / rp);
        b.less("β < Q/s′", bt, Q / sp);
        b.equal("1/r+1/s+(λ+α+β)/Q = 2", lhs, 2.0);
      } else {
        b.less("α+β < m_l λ/(Q−l m_l)", a + bt, layer_bound());
        b.less_eq("λ+lα+lβ ≤ Q", lam + weight_sum, Q);
        b.less("α < m_l/r′", a, m / rp);
        b.less("β < m_l/s′", bt, m / sp);
        b.equal("1/r+1/s+(λ+lα+lβ)/Q = 2", lhs, 2.0);
      }
      break;
    }
    case TheoremId::T3_1:
    case TheoremId::T4_1: {
      const double pp = conjugate_exponent(pr.p);
      rep.derived["p_prime"] = pp;
      b.add("1 < p ≤ q < ∞", pr.p > 1.0 && pr.p <= pr.q && std::isfinite(pr.q), pr.p, pr.q);
      b.add("0 < λ < Q", lam > 0.0 && lam < Q, lam, Q);
      b.less_eq("α+β ≥ 0", 0.0, a + bt);
      const double rhs = 1.0 / pr.p + (lam + weight_sum) / Q - 1.0;
      rep.derived["balance_residual"] = 1.0 / pr.q - rhs;
      rep.derived["lambda_bar"] = Q * (1.0 / pr.q + 1.0 / pp);
      if (theorem == TheoremId::T3_1) {
        b.less("α < Q/q", a, Q / pr.q);
        b.less("β < Q/p′", bt, Q / pp);
        b.equal("1/q = 1/p+(λ+α+β)/Q−1", 1.0 / pr.q, rhs);
      } else {
        b.less("α+β < m_l λ/(Q−l m_l)", a + bt, layer_bound());
        b.less("α < m_l/q", a, m / pr.q);
        b.less("β < m_l/p′", bt, m / pp);
        b.equal("1/q = 1/p+(λ+lα+lβ)/Q−1", 1.0 / pr.q, rhs);
      }
      break;
    }
  }
  rep.pass = rep.violated.empty();
  return rep;
}

}  // namespace carnot
