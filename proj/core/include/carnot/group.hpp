#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace carnot {

/// One entry of the Lie bracket table: [e_i, e_j] contains c * e_k.
/// Indices are 0-based over the concatenated basis of all layers.
struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;

  friend bool operator==(const StructureConstant&, const StructureConstant&) = default;
};

/// A stratified nilpotent Lie algebra g = V_1 + ... + V_r presented by layer
/// dimensions and structure constants. Coordinates are exponential
/// coordinates of the first kind, so the group and the algebra share them.
class GroupSpec {
 public:
  /// Throws Error(invalid_group) if step != layer_dims.size(), a layer is
  /// empty, or a bracket index is out of range. Algebraic axioms are not
  /// enforced here; see validate_group_spec.
  GroupSpec(int step, std::vector<int> layer_dims, std::vector<StructureConstant> brackets,
            std::string name = {});

  /// Same as the constructor, but first adds (j, i, k, -c) for every
  /// (i, j, k, c) whose antisymmetric partner is missing.
  static GroupSpec with_completed_brackets(int step, std::vector<int> layer_dims,
                                           std::vector<StructureConstant> brackets,
                                           std::string name = {});

  int step() const noexcept { return step_; }
  /// N = sum of layer dimensions.
  int dimension() const noexcept { return dimension_; }
  /// Q = sum over l of l * m_l.
  int homogeneous_dimension() const noexcept { return homogeneous_dimension_; }
  /// 2 * step!, the exponent in the homogeneous norm.
  int norm_exponent() const noexcept { return norm_exponent_; }

  const std::vector<int>& layer_dims() const noexcept { return layer_dims_; }
  /// 1-based layer index.
  int layer_dim(int layer) const { return layer_dims_.at(static_cast<std::size_t>(layer - 1)); }
  int layer_offset(int layer) const { return offsets_.at(static_cast<std::size_t>(layer - 1)); }
  /// 1-based layer containing the 0-based basis index.
  int layer_of(int index) const { return layer_of_.at(static_cast<std::size_t>(index)); }

  const std::vector<StructureConstant>& brackets() const noexcept { return brackets_; }
  const std::string& name() const noexcept { return name_; }

  /// out = [x, y]; all spans have length N and out must not alias x or y.
  void bracket(std::span<const double> x, std::span<const double> y, std::span<double> out) const;

  /// Canonical text used for caching and reports.
  std::string fingerprint() const;

 private:
  int step_;
  std::vector<int> layer_dims_;
  std::vector<StructureConstant> brackets_;
  std::string name_;
  int dimension_ = 0;
  int homogeneous_dimension_ = 0;
  int norm_exponent_ = 2;
  std::vector<int> offsets_;
  std::vector<int> layer_of_;
};

/// A group element in exponential coordinates, layers concatenated.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::size_t size() const noexcept { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }
  std::span<const double> view() const noexcept { return coords; }

  friend bool operator==(const Point&, const Point&) = default;
};

Point identity(const GroupSpec& spec);

/// Coordinates of layer `layer` (1-based) inside a full coordinate vector.
std::span<const double> layer_coords(const GroupSpec& spec, std::span<const double> u, int layer);

enum class ViolationKind { antisymmetry, grading, jacobi, generation };

struct Violation {
  ViolationKind kind;
  std::vector<int> indices;  // 1-based basis indices
  std::string message;
};

std::string to_string(ViolationKind kind);

/// Every violated axiom of a stratified Lie algebra; empty iff valid.
std::vector<Violation> validate_group_spec(const GroupSpec& spec);

// ---------------------------------------------------------------------------
// Group operations. The span overloads write into caller storage and are the
// ones used in sampling loops; `out` must not alias the inputs.

void multiply_into(const GroupSpec& spec, std::span<const double> u, std::span<const double> v,
                   std::span<double> out);
void inverse_into(std::span<const double> u, std::span<double> out);
void dilate_into(const GroupSpec& spec, double t, std::span<const double> u, std::span<double> out);
double homogeneous_norm(const GroupSpec& spec, std::span<const double> u);
/// |u^{-1} v|, using `scratch` (length >= 2N) to avoid allocation.
double pseudo_distance(const GroupSpec& spec, std::span<const double> u, std::span<const double> v,
                       std::span<double> scratch);
/// Euclidean length of layer `layer` of u.
double layer_norm(const GroupSpec& spec, std::span<const double> u, int layer);

/// BCH product truncated at the step. Throws Error(unsupported_step) for step > 3.
Point multiply(const GroupSpec& spec, const Point& u, const Point& v);
Point inverse(const GroupSpec& spec, const Point& u);
/// Layer l scaled by t^l. Throws Error(invalid_scale) if t <= 0.
Point dilate(const GroupSpec& spec, double t, const Point& u);
double homogeneous_norm(const GroupSpec& spec, const Point& u);
double pseudo_distance(const GroupSpec& spec, const Point& u, const Point& v);

namespace groups {

/// R^m: step 1, abelian.
GroupSpec euclidean(int m);
/// H^n: layers (2n, 1), [e_i, e_{n+i}] = e_{2n+1}.
GroupSpec heisenberg(int n);
/// Free step-2 nilpotent group on g generators: layers (g, g(g-1)/2).
GroupSpec free_step2(int generators);

/// Resolves "R<m>", "H<n>", "free2-<g>". Throws Error(invalid_argument) otherwise.
GroupSpec builtin(const std::string& name);
bool is_builtin_name(const std::string& name);

}  // namespace groups

}  // namespace carnot
