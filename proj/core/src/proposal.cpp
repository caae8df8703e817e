#include "carnot/detail/proposal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carnot/error.hpp"
#include "carnot/special.hpp"

namespace carnot::detail {

namespace {

constexpr double kClip = 0.9;

double log_box_volume(const GroupSpec& spec, double radius, int skip_layer) {
  double lv = 0.0;
  for (int j = 1; j <= spec.step(); ++j) {
    if (j == skip_layer) continue;
    lv += spec.layer_dim(j) * (std::numbers::ln2 + j * std::log(radius));
  }
  return lv;
}

bool all_zero(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

}  // namespace

MixtureProposal::MixtureProposal(const GroupSpec& spec, const BallSpec& domain,
                                 const std::vector<Singularity>& hints, bool stratify)
    : spec_(&spec), domain_(domain), domain_centered_(domain.is_centered()) {
  const auto n = static_cast<std::size_t>(spec.dimension());
  const double radius = domain.radius;
  const double q = spec.homogeneous_dimension();

  Component box{Component::Kind::box, domain.center.coords, 1, 0.0, -log_box_volume(spec, radius, 0),
                domain_centered_};
  comps_.push_back(std::move(box));

  for (const auto& h : hints) {
    if (!stratify || !(h.exponent > 0.0)) {
      hint_component_.push_back(-1);
      continue;
    }
    Component c{};
    if (h.kind == Singularity::Kind::point) {
      c.kind = Component::Kind::point;
      c.anchor = h.anchor.coords.empty() ? std::vector<double>(n, 0.0) : h.anchor.coords;
      if (c.anchor.size() != n) throw Error(ErrorCode::invalid_argument, "singularity anchor has wrong size");
      c.anchored_at_identity = all_zero(c.anchor);
      c.kappa = std::min(h.exponent, kClip * q);
      c.log_norm = std::log(q - c.kappa) - std::log(q) - std::log(unit_ball_volume(spec)) -
                   (q - c.kappa) * std::log(radius);
    } else {
      if (h.layer < 1 || h.layer > spec.step()) {
        throw Error(ErrorCode::invalid_argument, "singularity layer out of range");
      }
      c.kind = Component::Kind::layer;
      c.layer = h.layer;
      const double m = spec.layer_dim(h.layer);
      c.kappa = std::min(h.exponent, kClip * m);
      c.log_norm = -log_box_volume(spec, radius, h.layer) + std::log(m - c.kappa) -
                   std::log(sphere_surface(static_cast<int>(m) - 1)) - (m - c.kappa) * h.layer * std::log(radius);
    }
    hint_component_.push_back(static_cast<int>(comps_.size()));
    comps_.push_back(std::move(c));
  }

  dim_ = n + 3;
  w_.resize(n);
  tmp_.resize(n);
  inv_.resize(n);
}

void MixtureProposal::set_anchor(std::size_t index, std::span<const double> anchor) {
  auto& c = comps_.at(index);
  if (c.kind != Component::Kind::point) throw Error(ErrorCode::invalid_argument, "only point components move");
  std::copy(anchor.begin(), anchor.end(), c.anchor.begin());
  c.anchored_at_identity = all_zero(anchor);
}

void MixtureProposal::draw_box(UniformSource& src, std::size_t offset, double radius, int skip_layer,
                               std::span<double> w) {
  for (int l = 1; l <= spec_->step(); ++l) {
    if (l == skip_layer) continue;
    const double half = std::pow(radius, l);
    const auto off = static_cast<std::size_t>(spec_->layer_offset(l));
    for (std::size_t i = off; i < off + static_cast<std::size_t>(spec_->layer_dim(l)); ++i) {
      w[i] = (2.0 * src[offset + i] - 1.0) * half;
    }
  }
}

void MixtureProposal::draw_unit_ball_direction(UniformSource& src, std::size_t offset, std::span<double> sigma) {
  const auto n = sigma.size();
  // First attempt uses the structured coordinates, retries the auxiliary stream.
  for (int attempt = 0;; ++attempt) {
    for (int l = 1; l <= spec_->step(); ++l) {
      const auto off = static_cast<std::size_t>(spec_->layer_offset(l));
      for (std::size_t i = off; i < off + static_cast<std::size_t>(spec_->layer_dim(l)); ++i) {
        const double x = attempt == 0 ? src[offset + i] : src.aux().uniform();
        tmp_[i] = 2.0 * x - 1.0;
      }
    }
    const double r = homogeneous_norm(*spec_, std::span<const double>(tmp_.data(), n));
    if (r > 0.0 && r < 1.0) {
      dilate_into(*spec_, 1.0 / r, std::span<const double>(tmp_.data(), n), sigma);
      return;
    }
    if (attempt > 100000) throw Error(ErrorCode::degenerate_sampler, "unit ball rejection does not accept");
  }
}

void MixtureProposal::sample(UniformSource& src, std::size_t offset, std::span<double> v) {
  const auto n = static_cast<std::size_t>(spec_->dimension());
  const auto k = comps_.size();
  const auto pick = std::min<std::size_t>(k - 1, static_cast<std::size_t>(src[offset] * static_cast<double>(k)));
  const auto& c = comps_[pick];
  const std::size_t base = offset + 1;
  const double radius = domain_.radius;
  std::span<double> w(w_.data(), n);

  switch (c.kind) {
    case Component::Kind::box:
      draw_box(src, base, radius, 0, w);
      break;
    case Component::Kind::layer: {
      draw_box(src, base, radius, c.layer, w);
      const auto off = static_cast<std::size_t>(spec_->layer_offset(c.layer));
      const auto m = static_cast<std::size_t>(spec_->layer_dim(c.layer));
      auto z = w.subspan(off, m);
      if (m == 1) {
        z[0] = src[base + off] < 0.5 ? -1.0 : 1.0;
      } else {
        // Box-Muller over the layer's own slots plus one spare slot (index n).
        for (std::size_t i = 0; i < m; i += 2) {
          const double a = src[base + off + i];
          const double b = i + 1 < m ? src[base + off + i + 1] : src[base + n];
          const double rad = std::sqrt(-2.0 * std::log(1.0 - a));
          z[i] = rad * std::cos(2.0 * std::numbers::pi * b);
          if (i + 1 < m) z[i + 1] = rad * std::sin(2.0 * std::numbers::pi * b);
        }
        double norm = 0.0;
        for (double x : z) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
          z[0] = 1.0;
          norm = 1.0;
        }
        for (double& x : z) x /= norm;
      }
      const double rho = std::pow(radius, c.layer) *
                         std::pow(1.0 - src[base + n + 1], 1.0 / (static_cast<double>(m) - c.kappa));
      for (double& x : z) x *= rho;
      break;
    }
    case Component::Kind::point: {
      std::span<double> sigma(inv_.data(), n);
      draw_unit_ball_direction(src, base, sigma);
      const double q = spec_->homogeneous_dimension();
      const double rho = radius * std::pow(1.0 - src[base + n + 1], 1.0 / (q - c.kappa));
      dilate_into(*spec_, rho, sigma, w);
      break;
    }
  }

  if (c.anchored_at_identity) {
    std::copy(w.begin(), w.end(), v.begin());
  } else {
    multiply_into(*spec_, c.anchor, w, v);
  }
}

double MixtureProposal::component_density(const Component& c, std::span<const double> v) {
  const auto n = static_cast<std::size_t>(spec_->dimension());
  std::span<const double> w = v;
  if (!c.anchored_at_identity) {
    for (std::size_t i = 0; i < n; ++i) inv_[i] = -c.anchor[i];
    multiply_into(*spec_, std::span<const double>(inv_.data(), n), v, std::span<double>(tmp_.data(), n));
    w = std::span<const double>(tmp_.data(), n);
  }
  const double radius = domain_.radius;
  switch (c.kind) {
    case Component::Kind::box:
    case Component::Kind::layer: {
      for (int l = 1; l <= spec_->step(); ++l) {
        if (c.kind == Component::Kind::layer && l == c.layer) continue;
        const double half = std::pow(radius, l);
        for (double x : layer_coords(*spec_, w, l)) {
          if (std::abs(x) > half) return 0.0;
        }
      }
      if (c.kind == Component::Kind::box) return std::exp(c.log_norm);
      const double zl = layer_norm(*spec_, w, c.layer);
      if (zl >= std::pow(radius, c.layer)) return 0.0;
      return std::exp(c.log_norm - c.kappa * std::log(zl));
    }
    case Component::Kind::point: {
      const double r = homogeneous_norm(*spec_, w);
      if (r >= radius) return 0.0;
      return std::exp(c.log_norm - c.kappa * std::log(r));
    }
  }
  return 0.0;
}

double MixtureProposal::density(std::span<const double> v) {
  double total = 0.0;
  for (const auto& c : comps_) total += component_density(c, v);
  return total / static_cast<double>(comps_.size());
}

bool MixtureProposal::in_domain(std::span<const double> v) {
  if (domain_centered_) return homogeneous_norm(*spec_, v) < domain_.radius;
  const auto n = static_cast<std::size_t>(spec_->dimension());
  for (std::size_t i = 0; i < n; ++i) inv_[i] = -domain_.center.coords[i];
  multiply_into(*spec_, std::span<const double>(inv_.data(), n), v, std::span<double>(tmp_.data(), n));
  return homogeneous_norm(*spec_, std::span<const double>(tmp_.data(), n)) < domain_.radius;
}

}  // namespace carnot::detail
