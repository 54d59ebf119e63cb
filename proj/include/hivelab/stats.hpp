#pragma once
// Streaming moments, a deterministic parallel trial runner, and the two
// sample-distance statistics used by the test suites.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace hivelab {

struct running_stats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double d = x - mean;
    mean += d / double(count);
    m2 += d * (x - mean);
  }

  // Chan's pairwise update; associative enough that a fixed merge order gives
  // bit-identical results regardless of which thread produced which block
  void merge(const running_stats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = double(count + o.count);
    const double d = o.mean - mean;
    m2 += o.m2 + d * d * (double(count) * double(o.count)) / total;
    mean += d * double(o.count) / total;
    count += o.count;
  }

  double variance() const { return count > 1 ? m2 / double(count - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
};

// Runs trials 0..n_trials-1, reducing per fixed-size chunk and then merging
// chunks in index order. The chunking (not the thread count) defines the
// floating-point association, so results are identical for any n_threads.
inline running_stats run_trials(std::uint64_t n_trials,
                                const std::function<double(std::uint64_t)>& trial,
                                unsigned n_threads = 1,
                                std::uint64_t chunk_size = 16) {
  if (chunk_size == 0) throw std::invalid_argument("run_trials: chunk_size == 0");
  const std::uint64_t n_chunks = (n_trials + chunk_size - 1) / chunk_size;
  std::vector<running_stats> per_chunk(n_chunks);
  if (n_threads <= 1) {
    for (std::uint64_t ch = 0; ch < n_chunks; ++ch) {
      const std::uint64_t hi = std::min(n_trials, (ch + 1) * chunk_size);
      for (std::uint64_t t = ch * chunk_size; t < hi; ++t) per_chunk[ch].push(trial(t));
    }
  } else {
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::uint64_t ch = next.fetch_add(1);
        if (ch >= n_chunks) return;
        const std::uint64_t hi = std::min(n_trials, (ch + 1) * chunk_size);
        for (std::uint64_t t = ch * chunk_size; t < hi; ++t) per_chunk[ch].push(trial(t));
      }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  running_stats out;
  for (const auto& c : per_chunk) out.merge(c);
  return out;
}

// sup |F_emp - F| over the sample; samples must be sorted ascending
inline double ks_statistic(const std::vector<double>& sorted,
                           const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  const double n = double(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    sup = std::max(sup, std::max(std::abs(double(i + 1) / n - f),
                                 std::abs(double(i) / n - f)));
  }
  return sup;
}

// exact 1-Wasserstein distance between two empirical measures,
// given sorted samples; sizes may differ
inline double w1_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("w1_sorted: empty sample");
  if (a.size() == b.size()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / double(a.size());
  }
  // integrate |F_a^{-1} - F_b^{-1}| over probability mass
  double s = 0.0, p = 0.0;
  std::size_t i = 0, j = 0;
  const double na = double(a.size()), nb = double(b.size());
  while (i < a.size() && j < b.size()) {
    const double pa = double(i + 1) / na, pb = double(j + 1) / nb;
    const double q = std::min(pa, pb);
    s += (q - p) * std::abs(a[i] - b[j]);
    p = q;
    if (pa <= q + 1e-18) ++i;
    if (pb <= q + 1e-18) ++j;
  }
  return s;
}

}  // namespace hivelab
