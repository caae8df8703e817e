#include "carnot/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>
#include <tuple>

#include "carnot/error.hpp"

namespace carnot {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::invalid_group: return "InvalidGroup";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::unsupported_step: return "UnsupportedStep";
    case ErrorCode::invalid_scale: return "InvalidScale";
    case ErrorCode::degenerate_sampler: return "DegenerateSampler";
    case ErrorCode::non_finite_sample: return "NonFiniteSample";
    case ErrorCode::non_integrable_weight: return "NonIntegrableWeight";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::singular_evaluation_point: return "SingularEvaluationPoint";
    case ErrorCode::zero_norm: return "ZeroNorm";
    case ErrorCode::bad_epsilon: return "BadEpsilon";
    case ErrorCode::bad_tau: return "BadTau";
    case ErrorCode::inadmissible_params: return "InadmissibleParams";
  }
  return "Unknown";
}

namespace {

int factorial(int n) {
  int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<double>& scratch_buffer(std::size_t n) {
  thread_local std::vector<double> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

}  // namespace

GroupSpec::GroupSpec(int step, std::vector<int> layer_dims, std::vector<StructureConstant> brackets,
                     std::string name)
    : step_(step),
      layer_dims_(std::move(layer_dims)),
      brackets_(std::move(brackets)),
      name_(std::move(name)) {
  if (step_ < 1) throw Error(ErrorCode::invalid_group, "step must be a positive integer");
  if (static_cast<int>(layer_dims_.size()) != step_) {
    throw Error(ErrorCode::invalid_group, "layer_dims has " + std::to_string(layer_dims_.size()) +
                                              " entries but step is " + std::to_string(step_));
  }
  if (step_ > 10) throw Error(ErrorCode::invalid_group, "step above 10 is not representable");
  for (int l = 1; l <= step_; ++l) {
    const int m = layer_dims_[static_cast<std::size_t>(l - 1)];
    if (m < 1) throw Error(ErrorCode::invalid_group, "layer " + std::to_string(l) + " is empty");
    offsets_.push_back(dimension_);
    for (int i = 0; i < m; ++i) layer_of_.push_back(l);
    dimension_ += m;
    homogeneous_dimension_ += l * m;
  }
  norm_exponent_ = 2 * factorial(step_);
  for (const auto& b : brackets_) {
    if (b.i < 0 || b.j < 0 || b.k < 0 || b.i >= dimension_ || b.j >= dimension_ || b.k >= dimension_) {
      throw Error(ErrorCode::invalid_group, "bracket index out of range: (" + std::to_string(b.i + 1) +
                                                ", " + std::to_string(b.j + 1) + ", " +
                                                std::to_string(b.k + 1) + ")");
    }
    if (!std::isfinite(b.c)) throw Error(ErrorCode::invalid_group, "non-finite structure constant");
  }
}

GroupSpec GroupSpec::with_completed_brackets(int step, std::vector<int> layer_dims,
                                             std::vector<StructureConstant> brackets, std::string name) {
  std::vector<StructureConstant> completed = brackets;
  for (const auto& b : brackets) {
    const bool has_partner = std::any_of(brackets.begin(), brackets.end(), [&](const StructureConstant& o) {
      return o.i == b.j && o.j == b.i && o.k == b.k;
    });
    if (!has_partner && b.i != b.j) completed.push_back({b.j, b.i, b.k, -b.c});
  }
  return GroupSpec(step, std::move(layer_dims), std::move(completed), std::move(name));
}

void GroupSpec::bracket(std::span<const double> x, std::span<const double> y, std::span<double> out) const {
  std::fill(out.begin(), out.begin() + dimension_, 0.0);
  for (const auto& b : brackets_) out[b.k] += b.c * x[b.i] * y[b.j];
}

std::string GroupSpec::fingerprint() const {
  auto sorted = brackets_;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j, a.k, a.c) < std::tie(b.i, b.j, b.k, b.c);
  });
  std::ostringstream os;
  os.precision(17);
  os << "step=" << step_ << ";dims=";
  for (int m : layer_dims_) os << m << ',';
  os << ";br=";
  for (const auto& b : sorted) os << b.i << ',' << b.j << ',' << b.k << ',' << b.c << ';';
  return os.str();
}

Point identity(const GroupSpec& spec) {
  return Point(std::vector<double>(static_cast<std::size_t>(spec.dimension()), 0.0));
}

std::span<const double> layer_coords(const GroupSpec& spec, std::span<const double> u, int layer) {
  return u.subspan(static_cast<std::size_t>(spec.layer_offset(layer)),
                   static_cast<std::size_t>(spec.layer_dim(layer)));
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::antisymmetry: return "antisymmetry";
    case ViolationKind::grading: return "grading";
    case ViolationKind::jacobi: return "jacobi";
    case ViolationKind::generation: return "generation";
  }
  return "unknown";
}

namespace {

std::string triple(int a, int b, int c) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

// Rank of a small dense matrix by Gaussian elimination with partial pivoting.
int matrix_rank(std::vector<std::vector<double>> rows, double tol) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int rank = 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (std::abs(rows[i][c]) > std::abs(rows[pivot][c])) pivot = i;
    }
    if (std::abs(rows[pivot][c]) <= tol) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      const double f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<Violation> validate_group_spec(const GroupSpec& spec) {
  std::vector<Violation> out;
  const int n = spec.dimension();
  const int step = spec.step();

  std::map<std::tuple<int, int, int>, double> table;
  for (const auto& b : spec.brackets()) table[{b.i, b.j, b.k}] += b.c;

  for (const auto& [key, c] : table) {
    const auto [i, j, k] = key;
    if (c == 0.0) continue;
    if (i == j) {
      out.push_back({ViolationKind::antisymmetry, {i + 1, j + 1, k + 1},
                     "[e_i, e_i] must vanish at " + triple(i + 1, j + 1, k + 1)});
      continue;
    }
    const auto partner = table.find({j, i, k});
    const double pc = partner == table.end() ? 0.0 : partner->second;
    const bool matched = std::abs(pc + c) <= 1e-12 * std::max(1.0, std::abs(c));
    if (!matched && (i < j || partner == table.end() || partner->second == 0.0)) {
      out.push_back({ViolationKind::antisymmetry, {i + 1, j + 1, k + 1},
                     "missing or unequal antisymmetric partner for " + triple(i + 1, j + 1, k + 1)});
    }
  }

  for (const auto& [key, c] : table) {
    const auto [i, j, k] = key;
    if (c == 0.0) continue;
    const int target = spec.layer_of(i) + spec.layer_of(j);
    if (target > step) {
      out.push_back({ViolationKind::grading, {i + 1, j + 1, k + 1},
                     "bracket beyond the step must vanish at " + triple(i + 1, j + 1, k + 1)});
    } else if (spec.layer_of(k) != target) {
      out.push_back({ViolationKind::grading, {i + 1, j + 1, k + 1},
                     "bracket of layers " + std::to_string(spec.layer_of(i)) + " and " +
                         std::to_string(spec.layer_of(j)) + " lands in layer " +
                         std::to_string(spec.layer_of(k)) + " at " + triple(i + 1, j + 1, k + 1)});
    }
  }

  if (!spec.brackets().empty()) {
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> ea(un), eb(un), ec(un), t1(un), t2(un), jac(un);
    auto basis = [&](std::vector<double>& e, int idx) {
      std::fill(e.begin(), e.end(), 0.0);
      e[static_cast<std::size_t>(idx)] = 1.0;
    };
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        for (int c = b + 1; c < n; ++c) {
          basis(ea, a);
          basis(eb, b);
          basis(ec, c);
          std::fill(jac.begin(), jac.end(), 0.0);
          // [a,[b,c]] + [b,[c,a]] + [c,[a,b]]
          spec.bracket(eb, ec, t1);
          spec.bracket(ea, t1, t2);
          for (std::size_t q = 0; q < un; ++q) jac[q] += t2[q];
          spec.bracket(ec, ea, t1);
          spec.bracket(eb, t1, t2);
          for (std::size_t q = 0; q < un; ++q) jac[q] += t2[q];
          spec.bracket(ea, eb, t1);
          spec.bracket(ec, t1, t2);
          for (std::size_t q = 0; q < un; ++q) jac[q] += t2[q];
          const double worst = *std::max_element(jac.begin(), jac.end(),
                                                 [](double x, double y) { return std::abs(x) < std::abs(y); });
          if (std::abs(worst) > 1e-10) {
            out.push_back({ViolationKind::jacobi, {a + 1, b + 1, c + 1},
                           "Jacobi identity fails on " + triple(a + 1, b + 1, c + 1)});
          }
        }
      }
    }
  }

  // [V_1, V_l] must span V_{l+1}.
  for (int l = 1; l < step; ++l) {
    std::vector<std::vector<double>> rows;
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> x(un), y(un), br(un);
    const int target_off = spec.layer_offset(l + 1);
    const int target_dim = spec.layer_dim(l + 1);
    for (int i = 0; i < spec.layer_dim(1); ++i) {
      for (int j = 0; j < spec.layer_dim(l); ++j) {
        std::fill(x.begin(), x.end(), 0.0);
        std::fill(y.begin(), y.end(), 0.0);
        x[static_cast<std::size_t>(spec.layer_offset(1) + i)] = 1.0;
        y[static_cast<std::size_t>(spec.layer_offset(l) + j)] = 1.0;
        spec.bracket(x, y, br);
        rows.emplace_back(br.begin() + target_off, br.begin() + target_off + target_dim);
      }
    }
    if (matrix_rank(rows, 1e-12) < target_dim) {
      std::vector<int> idx;
      for (int q = 0; q < target_dim; ++q) idx.push_back(target_off + q + 1);
      out.push_back({ViolationKind::generation, std::move(idx),
                     "[V_1, V_" + std::to_string(l) + "] does not span V_" + std::to_string(l + 1)});
    }
  }
  return out;
}

void multiply_into(const GroupSpec& spec, std::span<const double> u, std::span<const double> v,
                   std::span<double> out) {
  const auto n = static_cast<std::size_t>(spec.dimension());
  const int step = spec.step();
  if (step > 3) throw Error(ErrorCode::unsupported_step, "group law implemented for step <= 3 only");
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] + v[i];
  if (step == 1 || spec.brackets().empty()) return;

  auto& buf = scratch_buffer(3 * n);
  std::span<double> uv(buf.data(), n);
  spec.bracket(u, v, uv);
  for (std::size_t i = 0; i < n; ++i) out[i] += 0.5 * uv[i];
  if (step == 2) return;

  std::span<double> a(buf.data() + n, n);
  std::span<double> b(buf.data() + 2 * n, n);
  spec.bracket(u, uv, a);  // [u,[u,v]]
  spec.bracket(v, uv, b);  // [v,[u,v]] = -[v,[v,u]]
  for (std::size_t i = 0; i < n; ++i) out[i] += (a[i] - b[i]) / 12.0;
}

void inverse_into(std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = -u[i];
}

void dilate_into(const GroupSpec& spec, double t, std::span<const double> u, std::span<double> out) {
  if (!(t > 0.0)) throw Error(ErrorCode::invalid_scale, "dilation parameter must be positive");
  double scale = 1.0;
  for (int l = 1; l <= spec.step(); ++l) {
    scale *= t;
    const auto off = static_cast<std::size_t>(spec.layer_offset(l));
    const auto m = static_cast<std::size_t>(spec.layer_dim(l));
    for (std::size_t i = off; i < off + m; ++i) out[i] = scale * u[i];
  }
}

double layer_norm(const GroupSpec& spec, std::span<const double> u, int layer) {
  const auto z = layer_coords(spec, u, layer);
  double s = 0.0;
  for (double x : z) s += x * x;
  return std::sqrt(s);
}

double homogeneous_norm(const GroupSpec& spec, std::span<const double> u) {
  const int r = spec.step();
  const double power = spec.norm_exponent();
  // (sum_j |z_j|^{2r!/j})^{1/2r!} rewritten as s * (sum_j (|z_j|^{1/j}/s)^{2r!})^{1/2r!}
  double roots[10];
  double s = 0.0;
  for (int j = 1; j <= r; ++j) {
    const double e = layer_norm(spec, u, j);
    roots[j - 1] = j == 1 ? e : std::pow(e, 1.0 / j);
    s = std::max(s, roots[j - 1]);
  }
  if (s == 0.0) return 0.0;
  if (r == 1) return s;
  double sum = 0.0;
  for (int j = 0; j < r; ++j) sum += std::pow(roots[j] / s, power);
  return s * std::pow(sum, 1.0 / power);
}

double pseudo_distance(const GroupSpec& spec, std::span<const double> u, std::span<const double> v,
                       std::span<double> scratch) {
  const auto n = static_cast<std::size_t>(spec.dimension());
  auto inv = scratch.subspan(0, n);
  auto prod = scratch.subspan(n, n);
  inverse_into(u, inv);
  multiply_into(spec, inv, v, prod);
  return homogeneous_norm(spec, prod);
}

namespace {

void check_size(const GroupSpec& spec, const Point& u) {
  if (u.size() != static_cast<std::size_t>(spec.dimension())) {
    throw Error(ErrorCode::invalid_argument, "point has " + std::to_string(u.size()) +
                                                 " coordinates, group dimension is " +
                                                 std::to_string(spec.dimension()));
  }
  for (double x : u.coords) {
    if (!std::isfinite(x)) throw Error(ErrorCode::invalid_argument, "point has a non-finite coordinate");
  }
}

}  // namespace

Point multiply(const GroupSpec& spec, const Point& u, const Point& v) {
  check_size(spec, u);
  check_size(spec, v);
  Point out = identity(spec);
  multiply_into(spec, u.coords, v.coords, out.coords);
  return out;
}

Point inverse(const GroupSpec& spec, const Point& u) {
  check_size(spec, u);
  Point out = identity(spec);
  inverse_into(u.coords, out.coords);
  return out;
}

Point dilate(const GroupSpec& spec, double t, const Point& u) {
  check_size(spec, u);
  Point out = identity(spec);
  dilate_into(spec, t, u.coords, out.coords);
  return out;
}

double homogeneous_norm(const GroupSpec& spec, const Point& u) {
  check_size(spec, u);
  return homogeneous_norm(spec, u.view());
}

double pseudo_distance(const GroupSpec& spec, const Point& u, const Point& v) {
  check_size(spec, u);
  check_size(spec, v);
  std::vector<double> scratch(2 * u.size());
  return pseudo_distance(spec, u.view(), v.view(), scratch);
}

namespace groups {

GroupSpec euclidean(int m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "R^m needs m >= 1");
  return GroupSpec(1, {m}, {}, "R" + std::to_string(m));
}

GroupSpec heisenberg(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "H^n needs n >= 1");
  std::vector<StructureConstant> br;
  for (int i = 0; i < n; ++i) {
    br.push_back({i, n + i, 2 * n, 1.0});
    br.push_back({n + i, i, 2 * n, -1.0});
  }
  return GroupSpec(2, {2 * n, 1}, std::move(br), "H" + std::to_string(n));
}

GroupSpec free_step2(int g) {
  if (g < 2) throw Error(ErrorCode::invalid_argument, "free step-2 group needs at least 2 generators");
  std::vector<StructureConstant> br;
  int k = g;
  for (int a = 0; a < g; ++a) {
    for (int b = a + 1; b < g; ++b) {
      br.push_back({a, b, k, 1.0});
      br.push_back({b, a, k, -1.0});
      ++k;
    }
  }
  return GroupSpec(2, {g, g * (g - 1) / 2}, std::move(br), "free2-" + std::to_string(g));
}

namespace {
const std::regex kEuclid(R"(R(\d+))");
const std::regex kHeis(R"(H(\d+))");
const std::regex kFree(R"(free2-(\d+))");
}  // namespace

bool is_builtin_name(const std::string& name) {
  return std::regex_match(name, kEuclid) || std::regex_match(name, kHeis) || std::regex_match(name, kFree);
}

GroupSpec builtin(const std::string& name) {
  std::smatch m;
  if (std::regex_match(name, m, kEuclid)) return euclidean(std::stoi(m[1]));
  if (std::regex_match(name, m, kHeis)) return heisenberg(std::stoi(m[1]));
  if (std::regex_match(name, m, kFree)) return free_step2(std::stoi(m[1]));
  throw Error(ErrorCode::invalid_argument, "unknown built-in group '" + name + "' (expected R<m>, H<n>, free2-<g>)");
}

}  // namespace groups

}  // namespace carnot
