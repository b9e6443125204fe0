#include "orient/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "orient/errors.hpp"

namespace orient {

namespace eval {

double bartlett(double lambda, double m, cplx h) { return lambda / std::norm(1.0 - m * h); }

cplx b_complete(double lambda, double m, double theta, cplx h1, cplx h2, cplx h12, BForm form) {
  cplx b;
  if (form == BForm::R) {
    // w3 = -w1 - w2, so hat h(w3) = conj(h12) and hat h(-w3) = h12.
    const cplx r1 = 1.0 / (1.0 - m * h1), r2 = 1.0 / (1.0 - m * h2), r3 = 1.0 / (1.0 - m * std::conj(h12));
    const cplx r1m = 1.0 / (1.0 - m * std::conj(h1)), r2m = 1.0 / (1.0 - m * std::conj(h2)),
               r3m = 1.0 / (1.0 - m * h12);
    b = lambda * r1 * r2 * r3 * (r1m + r2m + r3m - 2.0);
  } else {
    const cplx c1 = std::conj(h1), c2 = std::conj(h2);
    const cplx q = c1 * c2 + h12 * (c1 + c2 - 2.0 * m * c1 * c2);
    const double den = std::norm(1.0 - m * h1) * std::norm(1.0 - m * h2) * std::norm(1.0 - m * h12);
    b = lambda * (1.0 - m * m * q) / den;
  }
  return {b.real(), theta * b.imag()};
}

cplx b_factorial(double lambda, double m, double theta, cplx h1, cplx h2, cplx h12) {
  const cplx bc = b_complete(lambda, m, theta, h1, h2, h12, BForm::R);
  const double corr = bartlett(lambda, m, h1) + bartlett(lambda, m, h2) + bartlett(lambda, m, h12) - 2.0 * lambda;
  return {bc.real() - corr, bc.imag()};
}

double diagonal_a(double m, cplx ht, cplx h2t) {
  const double u1 = ht.real(), v1 = -ht.imag();
  const double u2 = h2t.real(), v2 = -h2t.imag();
  const double a1 = 1.0 - u1, a2 = 1.0 - u2;
  const double t0 = 2.0 * (1.0 - m) * (2.0 * v1 - v2);
  const double t1 = 2.0 * (1.0 - 2.0 * m) * (a1 * (v2 - v1) - a2 * v1);
  const double t2 = 2.0 * m * ((a1 * a1 - v1 * v1) * v2 - 2.0 * a2 * a1 * v1);
  return t0 + t1 + t2;
}

double im_b_diagonal(double lambda, double m, double theta, cplx ht, cplx h2t) {
  const double d1 = std::norm(1.0 - m * ht);
  const double d2 = std::norm(1.0 - m * std::conj(h2t));
  return -theta * lambda * m * m * diagonal_a(m, ht, h2t) / (d1 * d1 * d2);
}

}  // namespace eval

double bartlett(const ModelParams& p, double w) { return eval::bartlett(p.lambda(), p.m, p.kernel.transform(w)); }

cplx b_complete(const ModelParams& p, double w1, double w2, BForm form) {
  const auto& k = p.kernel;
  return eval::b_complete(p.lambda(), p.m, p.theta, k.transform(w1), k.transform(w2), k.transform(w1 + w2), form);
}

cplx b_factorial(const ModelParams& p, double w1, double w2) {
  const auto& k = p.kernel;
  return eval::b_factorial(p.lambda(), p.m, p.theta, k.transform(w1), k.transform(w2), k.transform(w1 + w2));
}

double im_b_diagonal(const ModelParams& p, double t) {
  return eval::im_b_diagonal(p.lambda(), p.m, p.theta, p.kernel.transform(t), p.kernel.transform(2.0 * t));
}

double borel_factorial3(double m) {
  if (!(m > 0.0 && m < 1.0)) throw InvalidArgument("branching ratio m must lie in (0, 1)");
  return m * m * (2.0 * m * m - 8.0 * m + 9.0) / std::pow(1.0 - m, 5);
}

double envelope(const ModelParams& p) { return p.nu * borel_factorial3(p.m); }

Kernel scaled_kernel(const Kernel& k, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("scale must be positive");
  if (const auto* e = k.as<family::Exponential>()) return Kernel::exponential(e->beta * beta);
  if (const auto* u = k.as<family::UniformHalf>()) return Kernel::uniform_half(u->a / beta);
  if (const auto* l = k.as<family::SymmetricLaplace>()) return Kernel::symmetric_laplace(l->beta * beta);
  throw UnsupportedKernelScaling("kernel family " + k.family_name() + " is not closed under time scaling");
}

ScaleCheck scale_check(const ModelParams& p, double beta, double w1, double w2, double rel_tol) {
  ModelParams q = p;
  q.kernel = scaled_kernel(p.kernel, beta);
  ScaleCheck out;
  out.scaled = b_factorial(q, w1, w2);
  out.reference = b_factorial(p, w1 / beta, w2 / beta);
  const double scale = std::max(std::abs(out.reference), 1e-300);
  out.rel_diff = std::abs(out.scaled - out.reference) / scale;
  out.pass = out.rel_diff <= rel_tol;
  return out;
}

namespace {

class TransformMemo {
 public:
  explicit TransformMemo(const Kernel& k) : k_(k) {}
  cplx operator()(double w) {
    const auto key = std::bit_cast<std::uint64_t>(w == 0.0 ? 0.0 : w);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const cplx v = k_.transform(w);
    memo_.emplace(key, v);
    return v;
  }

 private:
  const Kernel& k_;
  std::unordered_map<std::uint64_t, cplx> memo_;
};

}  // namespace

SpectralGrid bartlett_grid(const ModelParams& p, std::span<const double> ws) {
  SpectralGrid g;
  g.dims = 1;
  g.w1.assign(ws.begin(), ws.end());
  g.values.reserve(ws.size());
  for (double w : ws) g.values.emplace_back(bartlett(p, w), 0.0);
  return g;
}

SpectralGrid bispectrum_grid(const ModelParams& p, std::span<const double> w1s, std::span<const double> w2s,
                             BKind kind, BForm form) {
  TransformMemo hat(p.kernel);
  SpectralGrid g;
  g.dims = 2;
  g.values.reserve(w1s.size() * w2s.size());
  const double lam = p.lambda();
  for (double a : w1s) {
    for (double b : w2s) {
      g.w1.push_back(a);
      g.w2.push_back(b);
      const cplx h1 = hat(a), h2 = hat(b), h12 = hat(a + b);
      g.values.push_back(kind == BKind::Complete ? eval::b_complete(lam, p.m, p.theta, h1, h2, h12, form)
                                                 : eval::b_factorial(lam, p.m, p.theta, h1, h2, h12));
    }
  }
  return g;
}

}  // namespace orient
