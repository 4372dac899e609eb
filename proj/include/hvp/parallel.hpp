#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

namespace hvp {

// Thread count used by every parallel loop. Results never depend on it.
void set_threads(int n);
int threads();
// Reads HVP_THREADS; falls back to 1 when unset or invalid.
int default_threads();

template <class F>
void parallel_for(std::size_t n, F&& body) {
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(threads())
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

// parallel_for whose body may throw; the exception of the lowest failing
// index is rethrown after the loop.
template <class F>
void parallel_for_checked(std::size_t n, F&& body) {
  std::mutex m;
  std::size_t first = n;
  std::exception_ptr err;
  parallel_for(n, [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (i < first) {
        first = i;
        err = std::current_exception();
      }
    }
  });
  if (err) std::rethrow_exception(err);
}

namespace detail {

inline constexpr std::size_t kLeaf = 16;
inline constexpr std::size_t kBlock = 4096;

template <class T, class F>
T pairwise_range(std::size_t lo, std::size_t hi, F& term) {
  if (hi - lo <= kLeaf) {
    T s{};
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_range<T>(lo, mid, term) + pairwise_range<T>(mid, hi, term);
}

template <class T>
T pairwise_vector(std::vector<T>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_vector(v, lo, mid) + pairwise_vector(v, mid, hi);
}

}  // namespace detail

// Pairwise tree sum of term(0..n-1). The tree shape depends on n only.
template <class T, class F>
T pairwise_sum(std::size_t n, F&& term) {
  if (n == 0) return T{};
  const std::size_t blocks = (n + detail::kBlock - 1) / detail::kBlock;
  if (blocks == 1) return detail::pairwise_range<T>(0, n, term);
  std::vector<T> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = lo + detail::kBlock < n ? lo + detail::kBlock : n;
    partial[b] = detail::pairwise_range<T>(lo, hi, term);
  });
  return detail::pairwise_vector(partial, 0, blocks);
}

// Serial variant for use inside an already parallel loop.
template <class T, class F>
T serial_pairwise_sum(std::size_t n, F&& term) {
  if (n == 0) return T{};
  return detail::pairwise_range<T>(0, n, term);
}

template <class F>
double parallel_max(std::size_t n, F&& term) {
  if (n == 0) return 0.0;
  const std::size_t blocks = (n + detail::kBlock - 1) / detail::kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t lo = b * detail::kBlock;
    const std::size_t hi = lo + detail::kBlock < n ? lo + detail::kBlock : n;
    double m = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double t = term(i);
      if (t > m || t != t) m = t;
    }
    partial[b] = m;
  });
  double m = partial[0];
  for (double p : partial)
    if (p > m || p != p) m = p;
  return m;
}

}  // namespace hvp
