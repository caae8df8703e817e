#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "carnot/measure.hpp"
#include "carnot/random.hpp"

namespace carnot::detail {

/// Running mean and co-moments of a k-vector (Welford / Chan et al.).
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t k = 1) : mean_(k, 0.0), m2_(k * k, 0.0) {}

  void add(std::span<const double> x) {
    ++count_;
    const auto k = mean_.size();
    delta_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      delta_[i] = x[i] - mean_[i];
      mean_[i] += delta_[i] / static_cast<double>(count_);
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double after = x[i] - mean_[i];
      for (std::size_t j = 0; j < k; ++j) m2_[i * k + j] += after * delta_[j];
    }
  }

  void merge(const MomentAccumulator& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    const auto k = mean_.size();
    const double n1 = static_cast<double>(count_);
    const double n2 = static_cast<double>(o.count_);
    const double n = n1 + n2;
    std::vector<double> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = o.mean_[i] - mean_[i];
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) m2_[i * k + j] += o.m2_[i * k + j] + d[i] * d[j] * n1 * n2 / n;
    }
    for (std::size_t i = 0; i < k; ++i) mean_[i] += d[i] * n2 / n;
    count_ += o.count_;
  }

  std::uint64_t count() const noexcept { return count_; }
  const std::vector<double>& mean() const noexcept { return mean_; }
  /// Covariance of the sample mean: sample covariance / n.
  std::vector<double> mean_covariance() const {
    std::vector<double> c(m2_.size(), 0.0);
    if (count_ < 2) return c;
    const double denom = static_cast<double>(count_ - 1) * static_cast<double>(count_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = m2_[i] / denom;
    return c;
  }

 private:
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::vector<double> delta_;
  std::uint64_t count_ = 0;
};

inline constexpr std::uint64_t kChunkSize = 4096;

inline unsigned worker_count(const SamplerConfig& cfg, std::size_t chunks) {
  unsigned w = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(1, chunks)));
}

/// Runs cfg.n_samples draws split into fixed chunks; chunk c reads stream c.
/// `make_sampler()` is called once per worker and must return a callable
/// `void(UniformSource&, std::span<double> out)` writing k values. Partial
/// moments are merged in chunk order, so the result is independent of the
/// number of workers.
template <class MakeSampler>
MomentAccumulator run_sampling(const SamplerConfig& cfg, std::size_t dim, std::size_t k, MakeSampler make_sampler) {
  const std::uint64_t n = std::max<std::uint64_t>(1, cfg.n_samples);
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<MomentAccumulator> partial(chunks, MomentAccumulator(k));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      auto sampler = make_sampler();
      std::vector<double> out(k), out2(k), avg(k);
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t begin = c * kChunkSize;
        const std::uint64_t count = std::min(kChunkSize, n - begin);
        UniformSource src(cfg.scheme, cfg.seed, c, dim, begin);
        auto& acc = partial[c];
        if (cfg.antithetic) {
          for (std::uint64_t i = 0; i + 1 < count; i += 2) {
            src.next_point();
            sampler(src, std::span<double>(out));
            src.set_reflected(true);
            sampler(src, std::span<double>(out2));
            src.set_reflected(false);
            for (std::size_t q = 0; q < k; ++q) avg[q] = 0.5 * (out[q] + out2[q]);
            acc.add(avg);
          }
        } else {
          for (std::uint64_t i = 0; i < count; ++i) {
            src.next_point();
            sampler(src, std::span<double>(out));
            acc.add(out);
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  const unsigned workers = worker_count(cfg, chunks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MomentAccumulator total(k);
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace carnot::detail
