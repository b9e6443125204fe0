#include "orient/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orient/errors.hpp"

namespace orient::quad {

namespace {

// 21-point Kronrod rule with its embedded 10-point Gauss rule, nodes from Boost.
struct Rule {
  std::vector<double> x, wk, wg;  // wg[j] is the Gauss weight at x[j], 0 for Kronrod-only nodes
};

const Rule& rule() {
  static const Rule r = [] {
    using K = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    Rule out;
    const auto& kx = K::abscissa();
    const auto& kw = K::weights();
    out.x.assign(kx.begin(), kx.end());
    out.wk.assign(kw.begin(), kw.end());
    out.wg.assign(out.x.size(), 0.0);
    for (std::size_t i = 0; i < G::abscissa().size(); ++i)
      for (std::size_t j = 0; j < out.x.size(); ++j)
        if (std::fabs(out.x[j] - G::abscissa()[i]) < 1e-14) out.wg[j] = G::weights()[i];
    return out;
  }();
  return r;
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk21(const Fn& f, double a, double b) {
  const Rule& r = rule();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * r.wk[0];
  double gauss = fc * r.wg[0];
  for (std::size_t j = 1; j < r.x.size(); ++j) {
    const double dx = h * r.x[j];
    const double pair = f(c - dx) + f(c + dx);
    kron += r.wk[j] * pair;
    gauss += r.wg[j] * pair;
  }
  kron *= h;
  gauss *= h;
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::fabs(kron);
  return {a, b, kron, std::max(std::fabs(kron - gauss), roundoff)};
}

}  // namespace

Result integrate(const Fn& f, double a, double b, double abs_tol, std::size_t max_intervals) {
  if (a == b) return {};
  std::priority_queue<Interval> heap;
  Interval first = gk21(f, a, b);
  double total = first.value, err = first.error;
  heap.push(first);
  std::size_t count = 1;
  while (err > abs_tol && count < max_intervals) {
    Interval worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
    heap.pop();
    Interval left = gk21(f, worst.a, mid);
    Interval right = gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed drift from incremental updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {total, err};
}

Result integrate_to_inf(const Fn& f, double a, double abs_tol, std::size_t max_intervals) {
  auto mapped = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double one_minus = 1.0 - u;
    const double t = a + u / one_minus;
    const double v = f(t) / (one_minus * one_minus);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, abs_tol, max_intervals);
}

Result wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0) return {};
  if (n < 3) return {s[n - 1], n == 2 ? std::fabs(s[1] - s[0]) : std::numeric_limits<double>::infinity()};

  // Columns e_{-1} = 0, e_0 = s; even columns are estimates.
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> cur(s.begin(), s.end());
  std::vector<double> estimates{s[n - 1]};
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    bool stalled = false;
    for (std::size_t j = 0; j + k < n; ++j) {
      const double diff = cur[j + 1] - cur[j];
      if (diff == 0.0 || !std::isfinite(diff)) {
        stalled = true;
        break;
      }
      next[j] = prev[j + 1] + 1.0 / diff;
    }
    if (stalled) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) estimates.push_back(cur.back());
  }
  const std::size_t m = estimates.size();
  const double best = estimates[m - 1];
  double err;
  if (m >= 3) {
    err = std::fabs(best - estimates[m - 2]) + std::fabs(best - estimates[m - 3]);
  } else if (m == 2) {
    err = std::fabs(best - estimates[0]);
  } else {
    err = std::fabs(s[n - 1] - s[n - 2]);
  }
  return {best, err};
}

Result fourier_half_line(const Fn& f, double freq, Trig trig, double abs_tol, std::size_t max_segments) {
  if (!(freq > 0.0)) throw InvalidArgument("fourier_half_line: freq must be positive");
  const double half = std::numbers::pi / freq;
  auto integrand = trig == Trig::Sin ? Fn([&](double t) { return f(t) * std::sin(freq * t); })
                                     : Fn([&](double t) { return f(t) * std::cos(freq * t); });
  auto boundary = [&](std::size_t k) {
    if (k == 0) return 0.0;
    return trig == Trig::Sin ? static_cast<double>(k) * half
                             : (static_cast<double>(k) - 0.5) * half;
  };

  const double seg_tol = abs_tol * 0.05;
  std::vector<double> partial;
  double sum = 0.0, quad_err = 0.0;
  Result last{};
  double prev_est = std::numeric_limits<double>::quiet_NaN();
  int stable = 0;
  for (std::size_t k = 0; k < max_segments; ++k) {
    const Result seg = integrate(integrand, boundary(k), boundary(k + 1), seg_tol);
    sum += seg.value;
    quad_err += seg.error;
    partial.push_back(sum);

    const std::size_t w = std::min<std::size_t>(partial.size(), 40);
    last = wynn_epsilon(std::span<const double>(partial).subspan(partial.size() - w));
    const double tail_small = std::fabs(seg.value);
    if (k >= 2) {
      if (tail_small < 1e-6 * abs_tol && std::fabs(partial[k - 1] - partial[k - 2]) < 1e-3 * abs_tol) {
        return {sum, quad_err + tail_small};
      }
      stable = std::fabs(last.value - prev_est) < 0.25 * abs_tol ? stable + 1 : 0;
      if (stable >= 2 && last.error < abs_tol) return {last.value, last.error + quad_err};
    }
    prev_est = last.value;
  }
  throw QuadratureNotConverged("oscillatory quadrature missed target " + std::to_string(abs_tol) +
                               " after " + std::to_string(max_segments) + " segments (freq " +
                               std::to_string(freq) + ")");
}

}  // namespace orient::quad
