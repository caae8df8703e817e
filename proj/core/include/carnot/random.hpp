#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace carnot {

enum class SamplingScheme { pseudo_random, low_discrepancy };

/// Pseudo-random stream number k of a run seeded with `seed`; the engine is
/// seeded from all four 32-bit words of (seed, k), so streams are
/// reproducible independently of how they are scheduled and runs with nearby
/// seeds do not share streams.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Supplies fixed-dimension uniform points for one chunk of a sampling run.
/// Under low_discrepancy the points are a Cranley-Patterson shifted Sobol
/// sequence starting at `first_index`; `aux()` is always a pseudo-random stream
/// for draws whose count is not fixed (rejection retries).
class UniformSource {
 public:
  UniformSource(SamplingScheme scheme, std::uint64_t seed, std::uint64_t stream, std::size_t dim,
                std::uint64_t first_index);
  ~UniformSource();
  UniformSource(UniformSource&&) noexcept;
  UniformSource& operator=(UniformSource&&) noexcept;

  void next_point();
  std::size_t dim() const noexcept { return point_.size(); }
  /// Coordinate d of the current point, in [0, 1).
  double operator[](std::size_t d) const { return reflected_ ? 1.0 - point_[d] - 0x1.0p-53 : point_[d]; }
  /// Antithetic evaluation: coordinates read as 1 - x until reset.
  void set_reflected(bool on) noexcept { reflected_ = on; }
  StreamRng& aux() noexcept { return aux_; }

 private:
  struct Qmc;
  SamplingScheme scheme_;
  std::vector<double> point_;
  std::vector<double> shift_;
  StreamRng rng_;
  StreamRng aux_;
  std::unique_ptr<Qmc> qmc_;
  bool reflected_ = false;
};

}  // namespace carnot
