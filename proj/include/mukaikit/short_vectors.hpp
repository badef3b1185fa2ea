#pragma once

// Fincke–Pohst enumeration of short vectors of a positive-definite rational
// quadratic form, in exact arithmetic.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <future>
#include <thread>
#include <vector>

#include "mukaikit/exactlin.hpp"

namespace mukaikit {

namespace detail {

struct QuadraticDecomposition {
  std::vector<Rational> d; // q(x) = Σ d_i (x_i + Σ_{j>i} mu_ij x_j)²
  RatMatrix mu;
};

inline QuadraticDecomposition decompose_definite(const RatMatrix &q) {
  detail::require(q.is_symmetric(), "quadratic form must be symmetric");
  const std::size_t n = q.rows();
  RatMatrix a = q;
  QuadraticDecomposition out{std::vector<Rational>(n), RatMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) <= 0) throw invalid_input("quadratic form is not positive definite");
    out.d[i] = a(i, i);
    for (std::size_t j = i + 1; j < n; ++j) out.mu(i, j) = a(i, j) / a(i, i);
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = i + 1; l < n; ++l) a(k, l) -= out.mu(i, k) * a(i, l);
  }
  return out;
}

class ShortVectorSearch {
public:
  ShortVectorSearch(const QuadraticDecomposition &dec, const Rational &bound)
      : dec_(dec), bound_(bound), x_(dec.d.size()) {}

  /// Enumerates every completion of a fixed top coordinate.
  void run_top(const Integer &top) {
    const std::size_t n = x_.size();
    x_[n - 1] = top;
    Rational used = dec_.d[n - 1] * Rational(top) * Rational(top);
    if (used > bound_) return;
    descend(n - 1, bound_ - used);
  }

  std::vector<std::vector<Integer>> take() { return std::move(found_); }

  /// Integers x with d (x - c)² ≤ budget, in increasing order.
  static std::vector<Integer> window(const Rational &d, const Rational &c, const Rational &budget) {
    std::vector<Integer> below, above;
    auto fits = [&](const Integer &x) {
      Rational t = Rational(x) - c;
      return d * t * t <= budget;
    };
    Integer start = floor(c);
    for (Integer x = start; fits(x); --x) below.push_back(x);
    for (Integer x = start + 1; fits(x); ++x) above.push_back(x);
    std::reverse(below.begin(), below.end());
    below.insert(below.end(), above.begin(), above.end());
    return below;
  }

private:
  void descend(std::size_t level, const Rational &budget) {
    if (level == 0) {
      if (std::any_of(x_.begin(), x_.end(), [](const Integer &v) { return v != 0; })) found_.push_back(x_);
      return;
    }
    const std::size_t i = level - 1;
    Rational c = 0;
    for (std::size_t j = i + 1; j < x_.size(); ++j) c -= dec_.mu(i, j) * x_[j];
    for (const auto &xi : window(dec_.d[i], c, budget)) {
      x_[i] = xi;
      Rational t = Rational(xi) - c;
      descend(i, budget - dec_.d[i] * t * t);
    }
    x_[i] = 0;
  }

  const QuadraticDecomposition &dec_;
  Rational bound_;
  std::vector<Integer> x_;
  std::vector<std::vector<Integer>> found_;
};

} // namespace detail

/// Enumerations expected to visit more lattice points than this are refused.
inline double short_vector_limit = 1e8;

/// Gaussian-heuristic count of lattice points in {x : x^T q x ≤ bound}:
/// vol(unit ball) · bound^{n/2} / sqrt(det q).
inline double short_vector_count_estimate(const RatMatrix &q, const Rational &bound) {
  const std::size_t n = q.rows();
  if (n == 0 || bound < 0) return 0;
  auto dec = detail::decompose_definite(q);
  const double half = static_cast<double>(n) / 2;
  double log_count = half * std::log(M_PI) - std::lgamma(half + 1) + half * std::log(bound.get_d());
  for (const auto &d : dec.d) log_count -= 0.5 * std::log(d.get_d());
  return std::exp(log_count);
}

/// All nonzero x ∈ Z^n with x^T q x ≤ bound, sorted lexicographically. The
/// top coordinate's range is split across `threads` workers; the merged
/// output does not depend on the thread count.
inline std::vector<std::vector<Integer>> short_vectors(const RatMatrix &q, const Rational &bound, unsigned threads = 1) {
  const std::size_t n = q.rows();
  if (n == 0 || bound < 0) return {};
  auto dec = detail::decompose_definite(q);
  double estimate = short_vector_count_estimate(q, bound);
  if (estimate > short_vector_limit) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "short-vector enumeration would visit about " << estimate << " lattice points (limit " << short_vector_limit
        << ")";
    throw resource_limit(msg.str());
  }
  auto tops = detail::ShortVectorSearch::window(dec.d[n - 1], Rational(0), bound);

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tops.size())));
  std::vector<std::future<std::vector<std::vector<Integer>>>> jobs;
  for (unsigned w = 0; w < threads; ++w) {
    jobs.push_back(std::async(threads == 1 ? std::launch::deferred : std::launch::async, [&, w] {
      detail::ShortVectorSearch search(dec, bound);
      for (std::size_t k = w; k < tops.size(); k += threads) search.run_top(tops[k]);
      return search.take();
    }));
  }
  std::vector<std::vector<Integer>> out;
  for (auto &job : jobs) {
    auto part = job.get();
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace mukaikit
