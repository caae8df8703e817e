#include "carnot/random.hpp"

#include <cmath>

#include <boost/random/sobol.hpp>

namespace carnot {

namespace {
constexpr std::uint64_t kAuxTag = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kShiftTag = 0xD1B54A32D192ED03ULL;
}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

struct UniformSource::Qmc {
  explicit Qmc(std::size_t dim) : engine(static_cast<unsigned>(dim)) {}
  boost::random::sobol engine;
};

UniformSource::UniformSource(SamplingScheme scheme, std::uint64_t seed, std::uint64_t stream,
                             std::size_t dim, std::uint64_t first_index)
    : scheme_(scheme),
      point_(dim, 0.0),
      rng_(seed, stream),
      aux_(seed ^ kAuxTag, stream) {
  if (scheme_ == SamplingScheme::low_discrepancy) {
    // One shift per run (not per chunk) so chunks tile a single randomized sequence.
    StreamRng shift_rng(seed ^ kShiftTag, 0);
    shift_.resize(dim);
    for (auto& s : shift_) s = shift_rng.uniform();
    qmc_ = std::make_unique<Qmc>(dim);
    // Skip the origin point of the unshifted sequence.
    qmc_->engine.discard((first_index + 1) * dim);
  }
}

UniformSource::~UniformSource() = default;
UniformSource::UniformSource(UniformSource&&) noexcept = default;
UniformSource& UniformSource::operator=(UniformSource&&) noexcept = default;

void UniformSource::next_point() {
  if (scheme_ == SamplingScheme::pseudo_random) {
    for (auto& x : point_) x = rng_.uniform();
    return;
  }
  for (std::size_t d = 0; d < point_.size(); ++d) {
    const auto raw = qmc_->engine();
    const double x = static_cast<double>(raw >> 11) * 0x1.0p-53 + shift_[d];
    point_[d] = x - std::floor(x);
  }
}

}  // namespace carnot
