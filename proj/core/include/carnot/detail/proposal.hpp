#pragma once

#include <span>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/measure.hpp"
#include "carnot/random.hpp"

namespace carnot::detail {

/// Equal-weight mixture of
///   - the uniform distribution on the box circumscribing the domain ball,
///   - for each point singularity with exponent s: a homogeneous radial law
///     with density proportional to d(anchor, v)^{-kappa} on B(anchor, R),
///   - for each layer singularity: |z_l|^{-kappa} in layer l (Euclidean ball
///     of radius R^l), uniform box in the other layers, centred at identity.
/// kappa is the singular exponent clipped below m_l (layer) or Q (point), so
/// integrand / density stays bounded near the singular set.
///
/// Instances carry scratch space: use one per thread.
class MixtureProposal {
 public:
  MixtureProposal(const GroupSpec& spec, const BallSpec& domain, const std::vector<Singularity>& hints,
                  bool stratify);

  /// Uniform coordinates consumed per draw.
  std::size_t dim() const noexcept { return dim_; }
  std::size_t components() const noexcept { return comps_.size(); }

  /// Draws v using coordinates [offset, offset + dim()) of the current point.
  void sample(UniformSource& src, std::size_t offset, std::span<double> v);
  /// Mixture density at v (0 outside every component's support).
  double density(std::span<const double> v);
  /// True iff v lies in the domain ball.
  bool in_domain(std::span<const double> v);

  /// Moves the anchor of component `index` (point singularities only).
  void set_anchor(std::size_t index, std::span<const double> anchor);
  /// Index of the component built for hints[i], or -1 if that hint was dropped.
  int component_for_hint(std::size_t i) const { return hint_component_[i]; }

 private:
  struct Component {
    enum class Kind { box, point, layer } kind;
    std::vector<double> anchor;  // box: domain centre; point: singular point
    int layer = 1;
    double kappa = 0.0;
    double log_norm = 0.0;  // log of the density's normalising factor
    bool anchored_at_identity = true;
  };

  void draw_box(UniformSource& src, std::size_t offset, double radius, int skip_layer, std::span<double> w);
  void draw_unit_ball_direction(UniformSource& src, std::size_t offset, std::span<double> sigma);
  double component_density(const Component& c, std::span<const double> v);

  const GroupSpec* spec_;
  BallSpec domain_;
  bool domain_centered_;
  std::vector<Component> comps_;
  std::vector<int> hint_component_;
  std::size_t dim_;
  std::vector<double> w_, tmp_, inv_;
};

}  // namespace carnot::detail
