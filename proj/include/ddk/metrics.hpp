#pragma once

#include "ddk/grid.hpp"

#include <functional>
#include <vector>

namespace ddk {

double rmse(const MelGrid& a, const MelGrid& b);

/// Sum of squared orthonormal DCT coefficients with i + j >= cutoff.
/// cutoff = 0 gives the total energy. Requires cutoff < max(W, H).
double hf_energy(const MelGrid& x, int cutoff);

/// Energy per anti-diagonal band: entry d sums squared DCT coefficients with i + j = d.
std::vector<double> frequency_energy(const MelGrid& x);

struct MetricReport {
    double rmse = 0.0;
    double prior_rmse = 0.0;
    double improvement_ratio = 0.0;  // rmse / prior_rmse, 0 when the prior is exact
    std::vector<double> frequency_energy;  // of the hypothesis
};

MetricReport evaluate(const MelGrid& hypothesis, const MelGrid& reference, const MelGrid& prior);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;         // unbiased
    double mean_stderr = 0.0;      // sqrt(variance / trials)
    double variance_stderr = 0.0;  // from the sample fourth central moment
    std::size_t trials = 0;
};

/// Moments of `trials` scalars produced by sampler; trials >= 2.
Moments mc_moments(const std::function<double()>& sampler, std::size_t trials);

}  // namespace ddk
