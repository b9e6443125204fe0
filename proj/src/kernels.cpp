#include "orient/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "orient/errors.hpp"
#include "orient/match.hpp"
#include "orient/quadrature.hpp"

namespace orient {

namespace {

constexpr double kLomaxTol = 1e-11;
constexpr double kTransformTarget = 1e-9;

// sin(w a) / w, continuous at w = 0.
double sin_over(double w, double a) {
  const double z = w * a;
  if (std::fabs(z) < 1e-4) return a * (1.0 - z * z / 6.0);
  return std::sin(z) / w;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive and finite");
}

TransformValue lomax_transform(double alpha, double w) {
  if (w == 0.0) return {{1.0, 0.0}, 0.0};
  const double aw = std::fabs(w);
  auto h = [alpha](double t) { return alpha * std::pow(1.0 + t, -1.0 - alpha); };
  const auto c = quad::fourier_half_line(h, aw, quad::Trig::Cos, kLomaxTol);
  const auto s = quad::fourier_half_line(h, aw, quad::Trig::Sin, kLomaxTol);
  const double err = c.error + s.error;
  if (err > kTransformTarget)
    throw QuadratureNotConverged("Lomax transform error bound " + fmt(err) + " above 1e-9 at w=" + fmt(w));
  const double im = w > 0 ? -s.value : s.value;
  return {{c.value, im}, err};
}

double tab_density(const family::TabulatedSymmetric& t, double x) {
  const double ax = std::fabs(x);
  const std::size_t n = t.density.size();
  const double pos = ax / t.spacing;
  if (pos > static_cast<double>(n - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(pos);
  if (i >= n - 1) return t.density[n - 1];
  const double f = pos - static_cast<double>(i);
  return t.density[i] + f * (t.density[i + 1] - t.density[i]);
}

// Mass on [0, x] for x >= 0.
double tab_cum(const family::TabulatedSymmetric& t, double x) {
  const std::size_t n = t.density.size();
  const double pos = x / t.spacing;
  if (pos >= static_cast<double>(n - 1)) return 0.5;
  const auto i = static_cast<std::size_t>(pos);
  const double d = x - static_cast<double>(i) * t.spacing;
  const double f0 = t.density[i];
  const double slope = (t.density[i + 1] - f0) / t.spacing;
  return t.half_cum[i] + f0 * d + 0.5 * slope * d * d;
}

std::complex<double> tab_transform(const family::TabulatedSymmetric& t, double w) {
  // Exact transform of the piecewise-linear even interpolant:
  // 2 [ f_last sin(w L)/w - sum_i s_i * 2 sin(w mid_i) sin(w h/2) / w^2 ].
  const std::size_t n = t.density.size();
  const double h = t.spacing;
  const double L = h * static_cast<double>(n - 1);
  const double half = sin_over(w, 0.5 * h);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = (t.density[i + 1] - t.density[i]) / h;
    if (s == 0.0) continue;
    const double mid = (static_cast<double>(i) + 0.5) * h;
    acc += s * sin_over(w, mid);
  }
  return {2.0 * (t.density[n - 1] * sin_over(w, L) - 2.0 * acc * half), 0.0};
}

double tab_sample(const family::TabulatedSymmetric& t, Rng& rng) {
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double target = 0.5 * rng.uniform();
  auto it = std::upper_bound(t.half_cum.begin(), t.half_cum.end(), target);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - t.half_cum.begin()) - 1));
  i = std::min(i, t.density.size() - 2);
  const double r = target - t.half_cum[i];
  const double f0 = t.density[i];
  const double slope = (t.density[i + 1] - f0) / t.spacing;
  const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * r);
  const double denom = f0 + std::sqrt(disc);
  double d = denom > 0.0 ? 2.0 * r / denom : 0.0;
  d = std::clamp(d, 0.0, t.spacing);
  return sign * (static_cast<double>(i) * t.spacing + d);
}

}  // namespace

Kernel::Kernel(KernelFamily f) : fam_(std::make_shared<const KernelFamily>(std::move(f))) {}

Kernel Kernel::exponential(double beta) {
  require_positive(beta, "exponential rate");
  return Kernel(family::Exponential{beta});
}
Kernel Kernel::lomax(double alpha) {
  require_positive(alpha, "Lomax tail index");
  return Kernel(family::Lomax{alpha});
}
Kernel Kernel::uniform_half(double a) {
  require_positive(a, "uniform width");
  return Kernel(family::UniformHalf{a});
}
Kernel Kernel::symmetric_laplace(double beta) {
  require_positive(beta, "Laplace rate");
  return Kernel(family::SymmetricLaplace{beta});
}

Kernel Kernel::tabulated(const std::vector<double>& x, const std::vector<double>& density, std::string source) {
  if (x.size() != density.size() || x.size() < 2)
    throw InvalidArgument("tabulated kernel needs at least two matching x/density samples");
  if (x.front() != 0.0) throw InvalidArgument("tabulated kernel grid must start at x = 0");
  const double h = x[1] - x[0];
  require_positive(h, "tabulated grid spacing");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw InvalidArgument("tabulated x must be strictly increasing");
    if (std::fabs((x[i] - x[i - 1]) - h) > 1e-9 * std::max(1.0, h))
      throw InvalidArgument("tabulated x must be uniformly spaced");
  }
  family::TabulatedSymmetric t;
  t.spacing = h;
  t.density = density;
  t.source = std::move(source);
  for (double d : t.density)
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("tabulated density must be finite and nonnegative");
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < t.density.size(); ++i) mass += 0.5 * h * (t.density[i] + t.density[i + 1]);
  if (!(mass > 0.0)) throw InvalidArgument("tabulated density has zero mass");
  const double scale = 0.5 / mass;
  for (double& d : t.density) d *= scale;
  t.half_cum.assign(t.density.size(), 0.0);
  for (std::size_t i = 1; i < t.density.size(); ++i)
    t.half_cum[i] = t.half_cum[i - 1] + 0.5 * h * (t.density[i - 1] + t.density[i]);
  return Kernel(std::move(t));
}

double Kernel::density(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Exponential>) {
          return x < 0.0 ? 0.0 : f.beta * std::exp(-f.beta * x);
        } else if constexpr (std::is_same_v<F, family::Lomax>) {
          return x < 0.0 ? 0.0 : f.alpha * std::pow(1.0 + x, -1.0 - f.alpha);
        } else if constexpr (std::is_same_v<F, family::UniformHalf>) {
          return (x < 0.0 || x > f.a) ? 0.0 : 1.0 / f.a;
        } else if constexpr (std::is_same_v<F, family::SymmetricLaplace>) {
          return 0.5 * f.beta * std::exp(-f.beta * std::fabs(x));
        } else if constexpr (std::is_same_v<F, family::TabulatedSymmetric>) {
          return tab_density(f, x);
        } else {
          return f.model->density(std::fabs(x));
        }
      },
      *fam_);
}

TransformValue Kernel::transform_checked(double w) const {
  return std::visit(
      [w](const auto& f) -> TransformValue {
        using F = std::decay_t<decltype(f)>;
        using C = std::complex<double>;
        if constexpr (std::is_same_v<F, family::Exponential>) {
          return {f.beta / C(f.beta, w), 0.0};
        } else if constexpr (std::is_same_v<F, family::Lomax>) {
          return lomax_transform(f.alpha, w);
        } else if constexpr (std::is_same_v<F, family::UniformHalf>) {
          const double z = 0.5 * f.a * w;
          const double sinc = std::fabs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
          return {std::polar(sinc, -z), 0.0};
        } else if constexpr (std::is_same_v<F, family::SymmetricLaplace>) {
          const double b2 = f.beta * f.beta;
          return {C(b2 / (b2 + w * w), 0.0), 0.0};
        } else if constexpr (std::is_same_v<F, family::TabulatedSymmetric>) {
          return {tab_transform(f, w), 0.0};
        } else {
          return {f.model->phi_transform(w), 0.0};
        }
      },
      *fam_);
}

double Kernel::survival(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Exponential>) {
          return x <= 0.0 ? 1.0 : std::exp(-f.beta * x);
        } else if constexpr (std::is_same_v<F, family::Lomax>) {
          return x <= 0.0 ? 1.0 : std::pow(1.0 + x, -f.alpha);
        } else if constexpr (std::is_same_v<F, family::UniformHalf>) {
          if (x <= 0.0) return 1.0;
          return x >= f.a ? 0.0 : 1.0 - x / f.a;
        } else if constexpr (std::is_same_v<F, family::SymmetricLaplace>) {
          return x >= 0.0 ? 0.5 * std::exp(-f.beta * x) : 1.0 - 0.5 * std::exp(f.beta * x);
        } else if constexpr (std::is_same_v<F, family::TabulatedSymmetric>) {
          return x >= 0.0 ? 0.5 - tab_cum(f, x) : 0.5 + tab_cum(f, -x);
        } else {
          return x >= 0.0 ? f.model->survival(x) : 1.0 - f.model->survival(-x);
        }
      },
      *fam_);
}

double Kernel::sample(Rng& rng) const {
  return std::visit(
      [&rng](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Exponential>) {
          return -std::log(rng.uniform()) / f.beta;
        } else if constexpr (std::is_same_v<F, family::Lomax>) {
          return std::pow(rng.uniform(), -1.0 / f.alpha) - 1.0;
        } else if constexpr (std::is_same_v<F, family::UniformHalf>) {
          return f.a * rng.uniform();
        } else if constexpr (std::is_same_v<F, family::SymmetricLaplace>) {
          const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
          return -sign * std::log(rng.uniform()) / f.beta;
        } else if constexpr (std::is_same_v<F, family::TabulatedSymmetric>) {
          return tab_sample(f, rng);
        } else {
          return f.model->sample(rng);
        }
      },
      *fam_);
}

double Kernel::tail_quantile(double tol) const {
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgument("tail tolerance must lie in (0, 1)");
  return std::visit(
      [tol](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Exponential>) {
          return std::log(1.0 / tol) / f.beta;
        } else if constexpr (std::is_same_v<F, family::Lomax>) {
          return std::pow(tol, -1.0 / f.alpha) - 1.0;
        } else if constexpr (std::is_same_v<F, family::UniformHalf>) {
          return f.a * (1.0 - tol);
        } else if constexpr (std::is_same_v<F, family::SymmetricLaplace>) {
          return std::log(1.0 / tol) / f.beta;
        } else if constexpr (std::is_same_v<F, family::TabulatedSymmetric>) {
          const std::size_t n = f.density.size();
          for (std::size_t i = 0; i < n; ++i)
            if (1.0 - 2.0 * f.half_cum[i] <= tol) return static_cast<double>(i) * f.spacing;
          return static_cast<double>(n - 1) * f.spacing;
        } else {
          return f.model->tail_quantile(tol);
        }
      },
      *fam_);
}

bool Kernel::one_sided() const {
  return std::holds_alternative<family::Exponential>(*fam_) || std::holds_alternative<family::Lomax>(*fam_) ||
         std::holds_alternative<family::UniformHalf>(*fam_);
}

std::string Kernel::spec() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Exponential>) {
          return "exp:" + fmt(f.beta);
        } else if constexpr (std::is_same_v<F, family::Lomax>) {
          return "lomax:" + fmt(f.alpha);
        } else if constexpr (std::is_same_v<F, family::UniformHalf>) {
          return "uhalf:" + fmt(f.a);
        } else if constexpr (std::is_same_v<F, family::SymmetricLaplace>) {
          return "slap:" + fmt(f.beta);
        } else if constexpr (std::is_same_v<F, family::TabulatedSymmetric>) {
          return "tab:" + f.source;
        } else {
          return "match:" + f.model->base().spec() + ":" + fmt(f.model->m());
        }
      },
      *fam_);
}

std::string Kernel::family_name() const {
  static const char* names[] = {"Exponential", "Lomax", "UniformHalf", "SymmetricLaplace", "TabulatedSymmetric",
                                "SymmetricMatch"};
  return names[fam_->index()];
}

KernelTailClass classify_tail(const Kernel& k) {
  if (const auto* l = k.as<family::Lomax>()) {
    if (l->alpha <= 2.0) return {TailKind::RegularlyVarying, l->alpha, 1.0};
    if (l->alpha <= 3.0) return {TailKind::FiniteSecondMoment, 0.0, 0.0};
    return {TailKind::FiniteThirdMoment, 0.0, 0.0};
  }
  if (k.as<family::SymmetricMatch>()) return {TailKind::Unknown, 0.0, 0.0};
  return {TailKind::FiniteThirdMoment, 0.0, 0.0};
}

std::vector<std::string> kernel_family_names() { return {"exp", "lomax", "uhalf", "slap", "match", "tab"}; }

namespace {

double parse_number(std::string_view s, std::string_view spec) {
  std::string str(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != str.size())
    throw InvalidArgument("kernel spec '" + std::string(spec) + "': '" + str + "' is not a number");
  return v;
}

std::string valid_families() {
  std::string out;
  for (const auto& n : kernel_family_names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

Kernel load_match_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!j.contains("metadata") || !j["metadata"].contains("base") || !j["metadata"].contains("m"))
    throw ParseError(path.string() + ": missing metadata.base / metadata.m");
  MatchSpec spec{parse_kernel_spec(j["metadata"]["base"].get<std::string>()), j["metadata"]["m"].get<double>(),
                 1e-12, std::nullopt};
  if (j["metadata"].contains("pn_truncation_eps"))
    spec.pn_truncation_eps = j["metadata"]["pn_truncation_eps"].get<double>();
  return build_matched_kernel(spec);
}

}  // namespace

Kernel parse_kernel_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw InvalidArgument("kernel spec '" + std::string(spec) + "' lacks ':'; valid families: " + valid_families());
  const std::string_view name = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  if (name == "exp" || name == "exponential") return Kernel::exponential(parse_number(rest, spec));
  if (name == "lomax") return Kernel::lomax(parse_number(rest, spec));
  if (name == "uhalf" || name == "uniform") return Kernel::uniform_half(parse_number(rest, spec));
  if (name == "slap" || name == "laplace") return Kernel::symmetric_laplace(parse_number(rest, spec));
  if (name == "match") {
    const auto last = rest.rfind(':');
    if (last == std::string_view::npos)
      throw InvalidArgument("kernel spec '" + std::string(spec) + "': expected match:<base>:<m>");
    return build_matched_kernel(MatchSpec{parse_kernel_spec(rest.substr(0, last)),
                                          parse_number(rest.substr(last + 1), spec), 1e-12, std::nullopt});
  }
  if (name == "tab") {
    const std::filesystem::path path{std::string(rest)};
    if (path.extension() == ".json") return load_match_json(path);
    return load_tabulated_csv(path);
  }
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'; valid families: " + valid_families());
}

Kernel load_tabulated_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::vector<double> xs, ds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("x", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 'x,density'");
    try {
      std::size_t u1 = 0, u2 = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      xs.push_back(std::stod(a, &u1));
      ds.push_back(std::stod(b, &u2));
      if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return Kernel::tabulated(xs, ds, path.string());
}

}  // namespace orient
