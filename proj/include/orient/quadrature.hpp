#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace orient::quad {

using Fn = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
};

// Globally adaptive 21-point Gauss-Kronrod on [a, b] with an absolute target.
Result integrate(const Fn& f, double a, double b, double abs_tol, std::size_t max_intervals = 4000);

// Integral over [a, inf) through the map t = a + u / (1 - u).
Result integrate_to_inf(const Fn& f, double a, double abs_tol, std::size_t max_intervals = 4000);

enum class Trig { Sin, Cos };

// Integral over [0, inf) of f(t) * trig(freq * t), freq > 0. The half line is
// split at the zeros of the trigonometric factor and the partial sums are
// accelerated with Wynn's epsilon algorithm. Throws QuadratureNotConverged
// when the target is missed after `max_segments` segments.
Result fourier_half_line(const Fn& f, double freq, Trig trig, double abs_tol,
                         std::size_t max_segments = 10000);

// Wynn epsilon extrapolation of a sequence of partial sums; error is the
// spread of the last three diagonal estimates.
Result wynn_epsilon(std::span<const double> partial_sums);

}  // namespace orient::quad
