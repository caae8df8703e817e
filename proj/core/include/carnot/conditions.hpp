#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/measure.hpp"
#include "carnot/operators.hpp"

namespace carnot {

// ---------------------------------------------------------------------------
// Quasi-triangle constant

struct TriangleEstimate {
  double value = 1.0;  // max ratio seen, never below 1
  std::uint64_t n_triples = 0;
  std::uint64_t seed = 0;
  Point u1, u2, u3;  // extremal triple (empty while the baseline 1 stands)
};

/// max d(u1,u2) / (d(u1,u3) + d(u3,u2)) over random triples drawn in sequence
/// from one stream, so a larger n_triples extends the same prefix and the
/// estimate cannot decrease. The baseline u3 = u1 contributes exactly 1.
/// Throws Error(invalid_argument) for n_triples = 0.
TriangleEstimate estimate_triangle_constant(const GroupSpec& spec, std::uint64_t n_triples, std::uint64_t seed);

inline constexpr std::uint64_t kTriangleTriples = 200'000;
inline constexpr std::uint64_t kTriangleSeed = 0x7472690000000001ULL;

/// estimate_triangle_constant with the defaults above, memoised per group
/// fingerprint. Thread-safe.
const TriangleEstimate& cached_triangle_constant(const GroupSpec& spec);

/// 9^λ K^{4λ} radius^{-λ}. Throws Error(domain_error) unless radius > 0,
/// K >= 1 and λ >= 0.
double phi_of_ball(double lambda, double k_g, double radius);

// ---------------------------------------------------------------------------
// Ball-pair condition

struct BallPair {
  BallSpec outer;  // B, radius r
  BallSpec inner;  // B', radius r'
};

struct Cond35Row {
  double r = 0.0;
  double r_prime = 0.0;
  double lhs = 0.0;         // (r'/r)^{Q-ε} φ(B')/φ(B)
  double simplified = 0.0;  // (r'/r)^{Q-λ-ε}
  double identity_residual = 0.0;
  bool pass = false;
};

struct Cond35Report {
  double epsilon = 0.0;
  double bound = 0.0;  // 4^{Q-λ-ε}
  std::vector<Cond35Row> rows;
  bool pass = false;
};

/// Throws Error(bad_epsilon) unless 0 < ε < Q - λ, and Error(invalid_argument)
/// if a pair is not certified as B' ⊆ 4B: concentric pairs need r' <= 4r,
/// others K (d(c, c') + r') <= 4r.
Cond35Report check_condition_35(const GroupSpec& spec, double lambda, double epsilon,
                                const std::vector<BallPair>& pairs, double k_g);

/// Concentric pairs r' ∈ {r/2, r, 2r, 4r} for each radius.
std::vector<BallPair> default_ball_pairs(const GroupSpec& spec, const std::vector<double>& radii);

// ---------------------------------------------------------------------------
// Averaged-weight condition

struct Cond36Config {
  WeightPlacement placement = WeightPlacement::full_norm;
  int layer = 0;
  double lambda = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double p = 2.0;
  double q = 2.0;
  std::optional<double> tau;
  std::vector<double> radii{0.5, 1.0, 2.0, 4.0, 8.0};
  SamplerConfig sampler;
};

struct TauWindow {
  double lower = 1.0;
  double upper = 0.0;  // may be +inf
  double pick(std::optional<double> requested) const;
};

/// Open window for τ: 1 < τ < min{Q/(αq), Q/(βp')} (m_l in place of Q for
/// layer weights); a term whose exponent is <= 0 imposes nothing.
TauWindow tau_window(const GroupSpec& spec, const Cond36Config& cfg);

struct Cond36Row {
  double radius = 0.0;
  double phi = 0.0;
  IntegralEstimate volume;
  IntegralEstimate m1, m2, m3;
  IntegralEstimate product;
  double m2_closed = 0.0;  // centered-ball closed form of M2
  double m2_z = 0.0;
  double z_constancy = 0.0;
};

struct Cond36Report {
  double k_g = 1.0;
  double tau = 0.0;
  double lambda_bar = 0.0;
  double exponent = 0.0;  // λ̄ − λ − α − β (or the layer analog)
  double weighted_mean = 0.0;
  std::vector<Cond36Row> rows;
  bool pass = false;
};

/// M1 M2 M3 per centered ball with
///   M1 = φ(B) |B|^{1/p' + 1/q},
///   M2 = (|B|^{-1} ∫_B w1^τ)^{1/(qτ)},       w1 = |u|^{-αq} or |z_l|^{-αq},
///   M3 = (|B|^{-1} ∫_B w2^{(1-p')τ})^{1/(p'τ)}, w2 = |u|^{βp} or |z_l|^{βp}.
/// Constancy: each product is compared with the inverse-variance weighted
/// mean, z_i = (P_i - P̄)/sqrt(σ_i² - σ̄²); pass iff every |z_i| <= 3.
/// Throws Error(bad_tau) if the τ window is empty or τ lies outside it.
Cond36Report check_condition_36(const GroupSpec& spec, const Cond36Config& cfg, double k_g);

struct SWConditionReport {
  double k_g = 1.0;
  double epsilon = 0.0;
  double tau = 0.0;
  double lambda_bar = 0.0;
  Cond35Report cond35;
  Cond36Report cond36;
  bool cond35_pass = false;
  bool cond36_pass = false;
};

/// Both conditions over the radii of `cfg`, K_G from the cache, ε defaulting to
/// (Q − λ)/2.
SWConditionReport sw_conditions(const GroupSpec& spec, const Cond36Config& cfg,
                                std::optional<double> epsilon = std::nullopt);

}  // namespace carnot
