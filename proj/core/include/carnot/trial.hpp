#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/measure.hpp"

namespace carnot {

/// f(u) = exp(-sum_j c_j |z_j(center^{-1} u)|^{2r!/j}).
struct AnisoBump {
  std::vector<double> decay;  // one positive rate per layer
  Point center;
};

struct BallIndicator {
  BallSpec ball;
};

/// Values on a regular grid over an axis-aligned coordinate box, row-major
/// (last axis fastest), multilinear in between and zero outside the box.
/// The grid is read at origin^{-1} u, which keeps the family closed under
/// left translation and dilation.
struct TabulatedGrid {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> shape;
  std::vector<double> values;
  Point origin;

  void check() const;
  double interpolate(std::span<const double> x) const;
};

/// Real-valued test function for the operators; complex conjugation is the
/// identity on this family.
class TrialFunction {
 public:
  using Params = std::variant<AnisoBump, BallIndicator, TabulatedGrid>;

  /// The zero function.
  TrialFunction() = default;

  static TrialFunction aniso_bump(const GroupSpec& spec, std::vector<double> decay, Point center = {});
  static TrialFunction ball_indicator(const GroupSpec& spec, BallSpec ball);
  static TrialFunction tabulated(const GroupSpec& spec, TabulatedGrid grid);

  double operator()(const GroupSpec& spec, std::span<const double> u) const;
  /// Evaluates with the group bound; the returned callable keeps a reference
  /// to `spec` and a copy of this function.
  Integrand bind(const GroupSpec& spec) const;

  /// c * f
  TrialFunction scaled(double c) const;
  /// u -> f(delta_t u)
  TrialFunction dilated(const GroupSpec& spec, double t) const;
  /// u -> f(w^{-1} u)
  TrialFunction translated(const GroupSpec& spec, const Point& w) const;

  /// Point the function is concentrated around: bump centre, ball centre or
  /// grid origin.
  Point focus(const GroupSpec& spec) const;

  std::string_view kind_name() const;
  double amplitude() const noexcept { return amplitude_; }
  const Params& params() const noexcept { return params_; }

 private:
  TrialFunction(Params p, double amplitude) : params_(std::move(p)), amplitude_(amplitude) {}

  Params params_;
  double amplitude_ = 0.0;
};

/// Grid files: an ASCII header followed by raw little-endian float64 values.
///
///   carnot-grid 1
///   dims <D>
///   shape <n_1> ... <n_D>
///   lower <a_1> ... <a_D>
///   upper <b_1> ... <b_D>
///   order row-major
///   end_header
///   <prod n_i doubles>
TabulatedGrid read_grid(std::istream& in);
void write_grid(std::ostream& out, const TabulatedGrid& grid);
TabulatedGrid load_grid(const std::filesystem::path& path);
void save_grid(const std::filesystem::path& path, const TabulatedGrid& grid);

}  // namespace carnot
