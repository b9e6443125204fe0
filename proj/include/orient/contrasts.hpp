#pragma once

// Finite-window odd orientation contrast
// O_{T,g} = (1/T) sum over distinct (i0, i1, i2) of g(x_i1 - x_i0, x_i2 - x_i0).

#include <string>
#include <vector>

#include "orient/cumulant3.hpp"
#include "orient/simulate.hpp"
#include "orient/test_function.hpp"

namespace orient {

// Summation order: anchor index, then first neighbour index, then second, one
// accumulator. Neighbour windows use |x_j - x_i0| <= H. Returns 0 with an
// EmptyWindow warning for fewer than three events.
double contrast_statistic(const EventSeries& e, const OddTestFunction& g, std::vector<std::string>* warnings = nullptr);

struct ExactMean {
  double value = 0.0;      // theta * mu_T
  double mu_T = 0.0;       // finite-window functional
  double mu_inf = 0.0;     // window factor dropped
  double gap_bound = 0.0;  // 2 H sup|g| ||c3 odd||_1 / T
};

// `c3` must be inverted at theta = 1; its odd part is taken here.
ExactMean exact_mean(const ModelParams& p, const OddTestFunction& g, double T, const CumulantGrid& c3);

struct LinearityScan {
  std::vector<double> theta;
  std::vector<double> mean;
  std::vector<double> std_err;
  double slope = 0.0, slope_se = 0.0;
  double intercept = 0.0, intercept_se = 0.0;
  std::size_t replicates = 0;
};

// Replicate r at theta index i uses substream rng.split((i << 32) | r).
LinearityScan linearity_scan(const ModelParams& p, const OddTestFunction& g, double T,
                             const std::vector<double>& thetas, std::size_t replicates, const Rng& rng,
                             const SimulationOptions& sim = {});

}  // namespace orient
