#include "orient/match.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orient/errors.hpp"
#include "orient/quadrature.hpp"

namespace orient {

namespace {

constexpr double kConvTol = 1e-10;
constexpr double kInversionTol = 1e-9;
constexpr std::size_t kStallLimit = 10000;

// (h * h_check)(x) = int_0^inf h(|x| + u) h(u) du for a one-sided base.
double autoconvolution(const Kernel& base, double x) {
  const double ax = std::fabs(x);
  if (const auto* e = base.as<family::Exponential>()) return 0.5 * e->beta * std::exp(-e->beta * ax);
  if (const auto* u = base.as<family::UniformHalf>()) return ax >= u->a ? 0.0 : (u->a - ax) / (u->a * u->a);
  auto f = [&](double v) { return base.density(ax + v) * base.density(v); };
  return quad::integrate_to_inf(f, 0.0, kConvTol).value;
}

double rho_value(const Kernel& base, double m, double x) {
  const double ax = std::fabs(x);
  if (const auto* e = base.as<family::Exponential>()) return 0.5 * e->beta * std::exp(-e->beta * ax);
  const double v = (base.density(ax) - m * autoconvolution(base, ax)) / (2.0 - m);
  if (v < -1e-12) throw NegativeDensity("rho_h(" + std::to_string(x) + ") = " + std::to_string(v));
  return std::max(v, 0.0);
}

double rho_hat(const Kernel& base, double m, double w) {
  const auto h = base.transform(w);
  return (2.0 * h.real() - m * std::norm(h)) / (2.0 - m);
}

std::complex<double> phi_value(const Kernel& base, double m, double w) {
  const double rho = rho_hat(base, m, w);
  const double r = 1.0 - m * (2.0 - m) * rho;
  if (r < (1.0 - m) * (1.0 - m) * (1.0 - 1e-9))
    throw BranchViolation("radicand " + std::to_string(r) + " below (1-m)^2 at w=" + std::to_string(w));
  // (1 - sqrt r) / m rewritten without cancellation for r near 1.
  return {(2.0 - m) * rho / (1.0 + std::sqrt(r)), 0.0};
}

}  // namespace

void validate_match_spec(const MatchSpec& spec) {
  if (!(spec.m > 0.0 && spec.m < 1.0)) throw InvalidArgument("branching ratio m must lie in (0, 1)");
  if (!(spec.pn_truncation_eps > 0.0 && spec.pn_truncation_eps < 1.0))
    throw InvalidArgument("pn_truncation_eps must lie in (0, 1)");
  if (!spec.base.one_sided()) throw NonMonotoneKernel("match base must be a one-sided kernel");
  const double top = spec.base.tail_quantile(1e-9);
  constexpr int kGrid = 1000;
  double prev = spec.base.density(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double x = top * i / (kGrid - 1);
    const double d = spec.base.density(x);
    if (d > prev + 1e-12)
      throw NonMonotoneKernel("base density increases near x=" + std::to_string(x));
    prev = d;
  }
}

std::vector<double> pn_weights(double m, double eps) {
  if (!(m > 0.0 && m < 1.0)) throw InvalidArgument("branching ratio m must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
  const double q = m * (2.0 - m);
  std::vector<double> p{(2.0 - m) / 2.0};
  double cum = p[0];
  while (cum < 1.0 - eps && p.size() < 100000000) {
    const double n = static_cast<double>(p.size());
    p.push_back(p.back() * (2.0 * n - 1.0) * q / (2.0 * (n + 1.0)));
    cum += p.back();
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) total += p[i];
  p.back() = 1.0 - total;
  return p;
}

MatchModel::MatchModel(MatchSpec spec) : spec_(std::move(spec)) {
  validate_match_spec(spec_);
  pn_ = pn_weights(spec_.m, spec_.pn_truncation_eps);
  pn_cdf_.resize(pn_.size());
  double c = 0.0;
  for (std::size_t i = 0; i < pn_.size(); ++i) pn_cdf_[i] = (c += pn_[i]);
  pn_cdf_.back() = 1.0;
}

double MatchModel::rho_density(double x) const { return rho_value(spec_.base, spec_.m, x); }
double MatchModel::rho_transform(double w) const { return rho_hat(spec_.base, spec_.m, w); }
double MatchModel::radicand(double w) const { return 1.0 - spec_.m * (2.0 - spec_.m) * rho_transform(w); }
std::complex<double> MatchModel::phi_transform(double w) const { return phi_value(spec_.base, spec_.m, w); }

double MatchModel::density(double x) const {
  const double ax = std::fabs(x);
  auto f = [this](double w) { return phi_transform(w).real(); };
  const double integral = ax == 0.0 ? quad::integrate_to_inf(f, 0.0, kInversionTol).value
                                    : quad::fourier_half_line(f, ax, quad::Trig::Cos, kInversionTol).value;
  return std::max(0.0, integral / std::numbers::pi);
}

double MatchModel::survival(double x) const {
  if (x == 0.0) return 0.5;
  if (x < 0.0) return 1.0 - survival(-x);
  auto f = [this](double w) { return phi_transform(w).real() / w; };
  const double s = quad::fourier_half_line(f, x, quad::Trig::Sin, kInversionTol).value;
  return std::clamp(0.5 - s / std::numbers::pi, 0.0, 1.0);
}

std::size_t MatchModel::sample_count(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::lower_bound(pn_cdf_.begin(), pn_cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - pn_cdf_.begin()), pn_.size() - 1) + 1;
}

double MatchModel::sample_rho(Rng& rng) const {
  // Two-sided base proposal; the acceptance event V h(x) >= m h(x + U), U ~ h,
  // has probability 1 - m (h * h_check)(x) / h(x) = (2 - m) rho_h(x) / h(|x|).
  const Kernel& h = spec_.base;
  for (std::size_t tries = 0; tries < kStallLimit; ++tries) {
    const double x = h.sample(rng);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double u = h.sample(rng);
    const double v = rng.uniform();
    if (v * h.density(x) >= spec_.m * h.density(x + u)) return sign * x;
  }
  throw RejectionStall("no acceptance in " + std::to_string(kStallLimit) + " consecutive proposals");
}

double MatchModel::sample(Rng& rng) const {
  const std::size_t k = sample_count(rng);
  double y = 0.0;
  for (std::size_t i = 0; i < k; ++i) y += sample_rho(rng);
  return y;
}

double MatchModel::tail_quantile(double tol) const {
  return 2.0 * spec_.base.tail_quantile(0.5 * tol * (1.0 - spec_.m));
}

double rho_density(const MatchSpec& spec, double x) { return rho_value(spec.base, spec.m, x); }

std::complex<double> phi_transform(const MatchSpec& spec, double w) { return phi_value(spec.base, spec.m, w); }

double sample_match(const MatchModel& model, Rng& rng) { return model.sample(rng); }

Kernel build_matched_kernel(const MatchSpec& spec) {
  return Kernel(family::SymmetricMatch{std::make_shared<const MatchModel>(spec)});
}

}  // namespace orient
