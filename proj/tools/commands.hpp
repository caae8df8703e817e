#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace carnot::cli {

enum class Format { json, csv };

/// Exit codes of every subcommand.
inline constexpr int kPass = 0;
inline constexpr int kNumericFailure = 1;
inline constexpr int kConfigError = 2;

/// Defaults shared by all subcommands.
struct Defaults {
  static constexpr std::uint64_t seed = 20240611;
  static constexpr std::uint64_t samples = 1'000'000;
  static constexpr std::uint64_t search_samples = 20'000;
  static constexpr std::uint64_t triangle_triples = 200'000;
  static constexpr double truncation_radius = 8.0;
  static inline const std::vector<double> gamma_fractions{0.0, 0.25, 0.5, 0.9};
  static inline const std::vector<double> radii{0.5, 1.0, 2.0, 4.0, 8.0};
};

struct RunConfig {
  std::string group = "H1";
  std::uint64_t seed = Defaults::seed;
  std::optional<std::uint64_t> samples;
  Format format = Format::json;
  std::string out;
  unsigned workers = 0;
  bool low_discrepancy = false;
};

struct Lemma44Options {
  std::vector<double> gamma_fractions = Defaults::gamma_fractions;
  std::vector<double> gammas;  // absolute values; override the fractions
  std::optional<int> layer;
};

struct WeightOptions {
  double lambda = 2.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::string weight = "full";
  std::optional<int> layer;
};

struct AdmissibleOptions {
  std::string theorem = "T2.1";
  double r = 2.0, s = 2.0, p = 2.0, q = 2.0;
  WeightOptions w;
};

struct SwOptions {
  WeightOptions w;
  double p = 2.0, q = 2.0;
  std::optional<double> tau;
  std::optional<double> epsilon;
  std::vector<double> radii = Defaults::radii;
};

struct ConstantOptions {
  WeightOptions w;
  double r = 2.0, s = 2.0;
  unsigned restarts = 4;
  std::size_t max_evals = 40;
  double radius = Defaults::truncation_radius;
};

struct GroupInfoOptions {
  std::uint64_t triples = Defaults::triangle_triples;
};

int cmd_group_info(const RunConfig& rc, const GroupInfoOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify_lemma44(const RunConfig& rc, const Lemma44Options& opt, std::ostream& out, std::ostream& err);
int cmd_check_admissible(const RunConfig& rc, const AdmissibleOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sw_conditions(const RunConfig& rc, const SwOptions& opt, std::ostream& out, std::ostream& err);
int cmd_estimate_constant(const RunConfig& rc, const ConstantOptions& opt, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace carnot::cli
