#pragma once

// Offspring displacement kernels: density, Fourier transform
// hat h(w) = int exp(-i w t) h(t) dt, upper-tail survival, and samplers.

#include <complex>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "orient/rng.hpp"

namespace orient {

class MatchModel;

namespace family {

struct Exponential {
  double beta;
};
struct Lomax {
  double alpha;
};
struct UniformHalf {
  double a;
};
struct SymmetricLaplace {
  double beta;
};
// Even density given on the half grid x_i = i * spacing, i = 0..n-1, linear
// between nodes and zero beyond the last node. `half_cum[i]` is the mass on
// [0, x_i]; the density is normalized so the half mass is exactly 1/2.
struct TabulatedSymmetric {
  double spacing;
  std::vector<double> density;
  std::vector<double> half_cum;
  std::string source;
};
// Even law of the reversible spectral match (see match.hpp).
struct SymmetricMatch {
  std::shared_ptr<const MatchModel> model;
};

}  // namespace family

using KernelFamily = std::variant<family::Exponential, family::Lomax, family::UniformHalf,
                                  family::SymmetricLaplace, family::TabulatedSymmetric,
                                  family::SymmetricMatch>;

struct TransformValue {
  std::complex<double> value;
  double error = 0.0;  // absolute bound; 0 for closed forms
};

class Kernel {
 public:
  explicit Kernel(KernelFamily f);

  static Kernel exponential(double beta);
  static Kernel lomax(double alpha);
  static Kernel uniform_half(double a);
  static Kernel symmetric_laplace(double beta);
  // Half-grid samples starting at x = 0 with uniform spacing.
  static Kernel tabulated(const std::vector<double>& x, const std::vector<double>& density,
                          std::string source = {});

  double density(double x) const;
  std::complex<double> transform(double w) const { return transform_checked(w).value; }
  TransformValue transform_checked(double w) const;
  double survival(double x) const;
  double sample(Rng& rng) const;
  // Smallest x with P(|X| > x) <= tol (heuristic bound for the spectral match).
  double tail_quantile(double tol) const;

  bool one_sided() const;
  bool symmetric() const { return !one_sided(); }
  std::string spec() const;
  std::string family_name() const;

  const KernelFamily& family() const { return *fam_; }
  template <class F>
  const F* as() const {
    return std::get_if<F>(fam_.get());
  }

 private:
  std::shared_ptr<const KernelFamily> fam_;
};

enum class TailKind { RegularlyVarying, FiniteThirdMoment, FiniteSecondMoment, Unknown };

struct KernelTailClass {
  TailKind kind = TailKind::Unknown;
  double alpha = 0.0;  // regular-variation index, RegularlyVarying only
  double level = 0.0;  // constant slowly varying level L
};

KernelTailClass classify_tail(const Kernel& k);

// Mini-grammar: exp:<beta>, lomax:<alpha>, uhalf:<a>, slap:<beta>,
// match:<base spec>:<m>, tab:<path> (CSV `x,density` or a `match build` JSON).
Kernel parse_kernel_spec(std::string_view spec);
std::vector<std::string> kernel_family_names();

Kernel load_tabulated_csv(const std::filesystem::path& path);

}  // namespace orient
