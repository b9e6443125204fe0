#include "orient/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "orient/errors.hpp"
#include "orient/parallel.hpp"
#include "orient/quadrature.hpp"
#include "orient/spectra.hpp"

namespace orient {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double C_alpha(double alpha) {
  return 0.5 * std::numbers::pi / (std::tgamma(alpha) * std::cos(0.5 * std::numbers::pi * alpha));
}

double S_alpha(double alpha) {
  return 0.5 * std::numbers::pi / (std::tgamma(alpha) * std::sin(0.5 * std::numbers::pi * alpha));
}

double chi_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw AlphaOutOfRange("alpha must lie in (0, 2]");
  if (alpha == 1.0) return 4.0 * std::numbers::ln2;
  if (alpha == 2.0) return 2.0 * std::numbers::pi;
  return 2.0 * (2.0 - std::pow(2.0, alpha)) * C_alpha(alpha);
}

MixtureZ MixtureZ::deterministic(double a) {
  if (!(a > 0.0)) throw InvalidArgument("deterministic scale must be positive");
  MixtureZ z;
  z.kind = Kind::Deterministic;
  z.a = a;
  return z;
}

MixtureZ MixtureZ::gamma2(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("Gamma rate must be positive");
  MixtureZ z;
  z.kind = Kind::Gamma2;
  z.beta = beta;
  return z;
}

MixtureZ MixtureZ::moments(double ez, double ez2, double ez3) {
  if (!(ez > 0.0 && ez2 > 0.0 && ez3 > 0.0) || !std::isfinite(ez))
    throw InvalidArgument("mixture moments must be positive with finite E Z");
  if (ez2 < ez * ez * (1.0 - 1e-12)) throw InvalidArgument("E Z^2 below (E Z)^2");
  MixtureZ z;
  z.kind = Kind::MomentList;
  z.ez = ez;
  z.ez2 = ez2;
  z.ez3 = ez3;
  return z;
}

double MixtureZ::moment(int p) const {
  if (p < 1 || p > 3) throw InvalidArgument("moment order must be 1, 2 or 3");
  switch (kind) {
    case Kind::Deterministic:
      return std::pow(a, p);
    case Kind::Gamma2:  // E Z^p = (p + 1)! / beta^p
      return std::tgamma(p + 2.0) / std::pow(beta, p);
    case Kind::MomentList:
      return p == 1 ? ez : p == 2 ? ez2 : ez3;
  }
  return 0.0;
}

double delta_m(const MixtureZ& z, double m) {
  const double e1 = z.moment(1), e2 = z.moment(2), e3 = z.moment(3);
  if (std::isinf(e3) || std::isinf(e2)) return kInf;
  return (1.0 - m) * (e3 - e1 * e2) + m * e1 * (e2 - e1 * e1);
}

double kernel_moment(const Kernel& k, int p) {
  if (const auto* l = k.as<family::Lomax>())
    if (l->alpha <= p) return kInf;
  if (const auto* e = k.as<family::Exponential>()) return std::tgamma(p + 1.0) / std::pow(e->beta, p);
  if (const auto* u = k.as<family::UniformHalf>()) return std::pow(u->a, p) / (p + 1.0);
  auto f = [&](double x) { return std::pow(x, p) * k.density(x); };
  const double lower = k.one_sided() ? 0.0 : -kInf;
  if (lower == 0.0) return quad::integrate_to_inf(f, 0.0, 1e-12).value;
  auto g = [&](double x) { return std::pow(-x, p) * k.density(-x); };
  const double pos = quad::integrate_to_inf(f, 0.0, 1e-12).value;
  const double neg = quad::integrate_to_inf(g, 0.0, 1e-12).value;
  return pos + (p % 2 == 0 ? neg : -neg);
}

MixtureZ z_from_kernel(const Kernel& k) {
  if (!k.one_sided()) throw NonMonotoneKernel(k.family_name() + " is not a one-sided monotone kernel");
  if (const auto* u = k.as<family::UniformHalf>()) return MixtureZ::deterministic(u->a);
  if (const auto* e = k.as<family::Exponential>()) return MixtureZ::gamma2(e->beta);
  return MixtureZ::moments(2.0 * kernel_moment(k, 1), 3.0 * kernel_moment(k, 2), 4.0 * kernel_moment(k, 3));
}

DiagReport diag_limit_check(const ModelParams& p, const KernelTailClass& tail, const std::vector<double>& t_list) {
  p.validate();
  if (t_list.empty()) throw InvalidArgument("t_list must not be empty");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0)) throw InvalidArgument("t values must be positive");
    if (i > 0 && !(t_list[i] < t_list[i - 1])) throw InvalidArgument("t_list must decrease toward 0");
  }
  DiagReport rep;
  const double lam = p.lambda(), m = p.m;
  switch (tail.kind) {
    case TailKind::RegularlyVarying:
      rep.route = "chi_alpha";
      rep.exponent = tail.alpha;
      rep.limit = lam * m * m * tail.level * chi_alpha(tail.alpha) / std::pow(1.0 - m, 5);
      break;
    case TailKind::FiniteThirdMoment:
      rep.exponent = 3.0;
      if (p.kernel.one_sided()) {
        rep.route = "delta_m";
        rep.limit = lam * m * m * delta_m(z_from_kernel(p.kernel), m) / (2.0 * std::pow(1.0 - m, 6));
      } else {
        rep.route = "none";
      }
      break;
    case TailKind::FiniteSecondMoment:
      rep.route = "divergent";
      rep.exponent = 3.0;
      rep.limit = kInf;
      break;
    case TailKind::Unknown:
      rep.route = "none";
      rep.exponent = 3.0;
      break;
  }
  ModelParams q = p;
  q.theta = 1.0;
  for (double t : t_list) {
    DiagEntry e;
    e.t = t;
    e.im_b = im_b_diagonal(q, t);
    e.underflow = std::fabs(e.im_b) < 1e-14;
    e.scaled = std::fabs(e.im_b) / std::pow(t, rep.exponent);
    e.ratio = (rep.limit > 0.0 && std::isfinite(rep.limit)) ? e.scaled / rep.limit
                                                             : std::numeric_limits<double>::quiet_NaN();
    rep.entries.push_back(e);
  }
  rep.all_underflow = true;
  for (const auto& e : rep.entries) rep.all_underflow = rep.all_underflow && e.underflow;
  rep.ratio_at_min = rep.entries.back().ratio;
  rep.monotone_approach = !rep.all_underflow;
  rep.divergent = !rep.all_underflow;
  for (std::size_t i = 1; i < rep.entries.size(); ++i) {
    const auto& a = rep.entries[i - 1];
    const auto& b = rep.entries[i];
    if (!(std::fabs(b.ratio - 1.0) <= std::fabs(a.ratio - 1.0))) rep.monotone_approach = false;
    if (!(b.scaled > a.scaled)) rep.divergent = false;
  }
  rep.converged = rep.monotone_approach && std::fabs(rep.ratio_at_min - 1.0) <= 0.05;
  return rep;
}

MomentCheck mixture_moment_check(const Kernel& k, int p, std::size_t n_samples, const Rng& rng) {
  if (n_samples < 2) throw InvalidArgument("need at least two samples");
  const MixtureZ z = z_from_kernel(k);
  MomentCheck out;
  out.expected = z.moment(p) / (p + 1.0);
  if (!std::isfinite(out.expected)) throw InvalidArgument("moment of order p is infinite");
  constexpr std::size_t kBlocks = 64;
  std::vector<double> sum(kBlocks, 0.0), sum2(kBlocks, 0.0);
  parallel_for(kBlocks, [&](std::size_t b) {
    Rng sub = rng.split(b);
    const std::size_t lo = b * n_samples / kBlocks, hi = (b + 1) * n_samples / kBlocks;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = std::pow(k.sample(sub), p);
      sum[b] += v;
      sum2[b] += v * v;
    }
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < kBlocks; ++b) {
    s += sum[b];
    s2 += sum2[b];
  }
  const double n = static_cast<double>(n_samples);
  out.mc_mean = s / n;
  const double var = std::max(0.0, (s2 - n * out.mc_mean * out.mc_mean) / (n - 1.0));
  out.std_err = std::sqrt(var / n);
  out.z = out.std_err > 0.0 ? (out.mc_mean - out.expected) / out.std_err : 0.0;
  out.pass = std::fabs(out.z) <= 4.0;
  return out;
}

}  // namespace orient
