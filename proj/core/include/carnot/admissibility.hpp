#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace carnot {

enum class TheoremId { T2_1, T2_2, T3_1, T4_1 };

std::string_view to_string(TheoremId id);
/// Accepts "T2.1", "2.1", "T2_1" and the like; nullopt otherwise.
std::optional<TheoremId> parse_theorem_id(std::string_view text);
/// True for the layer-weight regimes, which need l and m_l.
bool needs_layer(TheoremId id);

/// Exponents and weights of one parameter regime. The bilinear-form theorems
/// read (r, s); the operator-norm theorems read (p, q).
struct AdmissibilityParams {
  double r = 0.0;
  double s = 0.0;
  double p = 0.0;
  double q = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<int> layer;
};

struct ConditionResult {
  std::string name;  // printed form, e.g. "α+β ≥ 0"
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AdmissibilityReport {
  TheoremId theorem = TheoremId::T2_1;
  bool pass = false;
  std::vector<ConditionResult> conditions;
  std::vector<std::string> violated;
  /// r', s' (or p'), Q, the balance residual and, for layer regimes, the
  /// α+β bound and m_l.
  std::map<std::string, double> derived;
  std::vector<std::string> notes;
};

/// Tolerance on the balance equality.
inline constexpr double kBalanceTolerance = 1e-12;

/// Conjugate exponent x/(x-1); +inf at x = 1.
double conjugate_exponent(double x);

/// Evaluates every hypothesis of the selected regime. Layer regimes need both
/// `m_l` and `params.layer`; without them Error(invalid_argument) is thrown.
/// When Q = l m_l the bound m_l λ/(Q - l m_l) is taken as +inf and noted.
AdmissibilityReport check_admissible(TheoremId theorem, double Q, std::optional<double> m_l,
                                     const AdmissibilityParams& params);

}  // namespace carnot
