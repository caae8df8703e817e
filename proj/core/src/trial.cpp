#include "carnot/trial.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

namespace {

std::vector<double>& scratch(std::size_t n) {
  thread_local std::vector<double> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

// w = a^{-1} u into caller storage (no allocation when a is the identity).
std::span<const double> left_translate_back(const GroupSpec& spec, const Point& a, std::span<const double> u,
                                            std::span<double> out) {
  bool id = true;
  for (double x : a.coords) id = id && x == 0.0;
  if (id) return u;
  const auto n = u.size();
  auto& buf = scratch(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = -a.coords[i];
  multiply_into(spec, std::span<const double>(buf.data(), n), u, out);
  return out;
}

void require_size(const GroupSpec& spec, const Point& p, const char* what) {
  if (p.size() != static_cast<std::size_t>(spec.dimension())) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + " does not match the group dimension");
  }
}

}  // namespace

void TabulatedGrid::check() const {
  const auto d = shape.size();
  if (d == 0 || lower.size() != d || upper.size() != d) {
    throw Error(ErrorCode::invalid_argument, "grid needs matching shape, lower and upper of equal length");
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (shape[i] < 2) throw Error(ErrorCode::invalid_argument, "every grid axis needs at least 2 nodes");
    if (!(upper[i] > lower[i])) throw Error(ErrorCode::invalid_argument, "grid box must have upper > lower");
    total *= shape[i];
  }
  if (values.size() != total) throw Error(ErrorCode::invalid_argument, "grid value count does not match shape");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "grid values must be finite");
  }
}

double TabulatedGrid::interpolate(std::span<const double> x) const {
  const auto d = shape.size();
  std::size_t base = 0;
  double frac[16];
  std::size_t stride[16];
  std::size_t s = 1;
  for (std::size_t i = d; i-- > 0;) {
    stride[i] = s;
    s *= shape[i];
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return 0.0;
    const double pos = (x[i] - lower[i]) / (upper[i] - lower[i]) * static_cast<double>(shape[i] - 1);
    auto cell = static_cast<std::size_t>(pos);
    if (cell >= shape[i] - 1) cell = shape[i] - 2;
    frac[i] = pos - static_cast<double>(cell);
    base += cell * stride[i];
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    double w = 1.0;
    std::size_t idx = base;
    for (std::size_t i = 0; i < d; ++i) {
      if (corner & (std::size_t{1} << i)) {
        w *= frac[i];
        idx += stride[i];
      } else {
        w *= 1.0 - frac[i];
      }
    }
    if (w != 0.0) acc += w * values[idx];
  }
  return acc;
}

TrialFunction TrialFunction::aniso_bump(const GroupSpec& spec, std::vector<double> decay, Point center) {
  if (decay.size() != static_cast<std::size_t>(spec.step())) {
    throw Error(ErrorCode::invalid_argument, "aniso_bump needs one decay rate per layer");
  }
  for (double c : decay) {
    if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::invalid_argument, "decay rates must be positive");
  }
  if (center.coords.empty()) center = identity(spec);
  require_size(spec, center, "bump centre");
  return TrialFunction(AnisoBump{std::move(decay), std::move(center)}, 1.0);
}

TrialFunction TrialFunction::ball_indicator(const GroupSpec& spec, BallSpec ball) {
  ball.check(spec);
  return TrialFunction(BallIndicator{std::move(ball)}, 1.0);
}

TrialFunction TrialFunction::tabulated(const GroupSpec& spec, TabulatedGrid grid) {
  grid.check();
  if (grid.shape.size() != static_cast<std::size_t>(spec.dimension())) {
    throw Error(ErrorCode::invalid_argument, "grid dimension must equal the group dimension");
  }
  if (grid.shape.size() > 16) throw Error(ErrorCode::invalid_argument, "grids above 16 dimensions unsupported");
  if (grid.origin.coords.empty()) grid.origin = identity(spec);
  require_size(spec, grid.origin, "grid origin");
  return TrialFunction(std::move(grid), 1.0);
}

double TrialFunction::operator()(const GroupSpec& spec, std::span<const double> u) const {
  if (amplitude_ == 0.0) return 0.0;
  const auto n = u.size();
  thread_local std::vector<double> local;
  if (local.size() < n) local.resize(n);
  std::span<double> out(local.data(), n);

  return amplitude_ * std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnisoBump>) {
          const auto w = left_translate_back(spec, p.center, u, out);
          const double big_r = spec.norm_exponent();
          double e = 0.0;
          for (int j = 1; j <= spec.step(); ++j) {
            const double z = layer_norm(spec, w, j);
            if (z > 0.0) e += p.decay[static_cast<std::size_t>(j - 1)] * std::pow(z, big_r / j);
          }
          return std::exp(-e);
        } else if constexpr (std::is_same_v<T, BallIndicator>) {
          const auto w = left_translate_back(spec, p.ball.center, u, out);
          return homogeneous_norm(spec, w) < p.ball.radius ? 1.0 : 0.0;
        } else {
          const auto w = left_translate_back(spec, p.origin, u, out);
          return p.interpolate(w);
        }
      },
      params_);
}

Integrand TrialFunction::bind(const GroupSpec& spec) const {
  return [&spec, f = *this](std::span<const double> u) { return f(spec, u); };
}

TrialFunction TrialFunction::scaled(double c) const {
  auto copy = *this;
  copy.amplitude_ *= c;
  return copy;
}

TrialFunction TrialFunction::dilated(const GroupSpec& spec, double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::invalid_scale, "dilation parameter must be positive");
  auto copy = *this;
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnisoBump>) {
          // |t^j z_j|^{R/j} = t^R |z_j|^{R/j}
          const double f = std::pow(t, spec.norm_exponent());
          for (double& c : p.decay) c *= f;
          p.center = dilate(spec, 1.0 / t, p.center);
        } else if constexpr (std::is_same_v<T, BallIndicator>) {
          p.ball.center = dilate(spec, 1.0 / t, p.ball.center);
          p.ball.radius /= t;
        } else {
          p.origin = dilate(spec, 1.0 / t, p.origin);
          for (std::size_t i = 0; i < p.shape.size(); ++i) {
            const double s = std::pow(t, -spec.layer_of(static_cast<int>(i)));
            p.lower[i] *= s;
            p.upper[i] *= s;
          }
        }
      },
      copy.params_);
  return copy;
}

TrialFunction TrialFunction::translated(const GroupSpec& spec, const Point& w) const {
  require_size(spec, w, "translation");
  auto copy = *this;
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnisoBump>) {
          p.center = multiply(spec, w, p.center);
        } else if constexpr (std::is_same_v<T, BallIndicator>) {
          p.ball.center = multiply(spec, w, p.ball.center);
        } else {
          p.origin = multiply(spec, w, p.origin);
        }
      },
      copy.params_);
  return copy;
}

Point TrialFunction::focus(const GroupSpec& spec) const {
  if (amplitude_ == 0.0) return identity(spec);
  return std::visit(
      [](const auto& p) -> Point {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnisoBump>) {
          return p.center;
        } else if constexpr (std::is_same_v<T, BallIndicator>) {
          return p.ball.center;
        } else {
          return p.origin;
        }
      },
      params_);
}

std::string_view TrialFunction::kind_name() const {
  switch (params_.index()) {
    case 0: return "aniso_bump";
    case 1: return "ball_indicator";
    default: return "tabulated";
  }
}

// ---------------------------------------------------------------------------
// Grid files

namespace {

template <class T>
std::vector<T> read_values(std::istringstream& line, std::size_t n, const char* key) {
  std::vector<T> out(n);
  for (auto& v : out) {
    if (!(line >> v)) throw Error(ErrorCode::parse_error, std::string("grid header: bad '") + key + "' line");
  }
  return out;
}

}  // namespace

TabulatedGrid read_grid(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("carnot-grid", 0) != 0) {
    throw Error(ErrorCode::parse_error, "grid file must start with 'carnot-grid'");
  }
  TabulatedGrid g;
  std::size_t dims = 0;
  bool done = false;
  while (!done && std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dims") {
      ls >> dims;
    } else if (key == "shape") {
      g.shape = read_values<std::size_t>(ls, dims, "shape");
    } else if (key == "lower") {
      g.lower = read_values<double>(ls, dims, "lower");
    } else if (key == "upper") {
      g.upper = read_values<double>(ls, dims, "upper");
    } else if (key == "order") {
      std::string order;
      ls >> order;
      if (order != "row-major") throw Error(ErrorCode::parse_error, "only row-major grids are supported");
    } else if (key == "end_header") {
      done = true;
    } else if (!key.empty()) {
      throw Error(ErrorCode::parse_error, "unknown grid header key '" + key + "'");
    }
  }
  if (!done || dims == 0) throw Error(ErrorCode::parse_error, "grid header incomplete");
  std::size_t total = 1;
  for (auto s : g.shape) total *= s;
  g.values.resize(total);
  for (auto& v : g.values) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw Error(ErrorCode::parse_error, "grid data truncated");
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[b];
    v = std::bit_cast<double>(bits);
  }
  g.check();
  return g;
}

void write_grid(std::ostream& out, const TabulatedGrid& grid) {
  grid.check();
  out << "carnot-grid 1\n";
  out << "dims " << grid.shape.size() << "\n";
  out.precision(17);
  out << "shape";
  for (auto s : grid.shape) out << ' ' << s;
  out << "\nlower";
  for (double v : grid.lower) out << ' ' << v;
  out << "\nupper";
  for (double v : grid.upper) out << ' ' << v;
  out << "\norder row-major\nend_header\n";
  for (double v : grid.values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) {
      bytes[b] = static_cast<unsigned char>(bits & 0xFF);
      bits >>= 8;
    }
    out.write(reinterpret_cast<const char*>(bytes), 8);
  }
}

TabulatedGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open grid file " + path.string());
  return read_grid(in);
}

void save_grid(const std::filesystem::path& path, const TabulatedGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write grid file " + path.string());
  write_grid(out, grid);
}

}  // namespace carnot
