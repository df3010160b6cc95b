#include "ddk/metrics.hpp"

#include "ddk/dct.hpp"

#include <algorithm>
#include <cmath>

namespace ddk {

double rmse(const MelGrid& a, const MelGrid& b) {
    require_same_shape(a, b, "rmse");
    double se = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) {
        const double d = av[k] - bv[k];
        se += d * d;
    }
    return std::sqrt(se / static_cast<double>(av.size()));
}

double hf_energy(const MelGrid& x, int cutoff) {
    if (cutoff < 0 || static_cast<std::size_t>(cutoff) >= std::max(x.width(), x.height())) {
        throw ValueError("hf_energy: cutoff must lie in [0, max(W, H))");
    }
    const FrequencySpectrum s = dct2_forward(x);
    double e = 0.0;
    for (std::size_t i = 0; i < x.width(); ++i) {
        for (std::size_t j = 0; j < x.height(); ++j) {
            if (i + j >= static_cast<std::size_t>(cutoff)) e += s(i, j) * s(i, j);
        }
    }
    return e;
}

std::vector<double> frequency_energy(const MelGrid& x) {
    const FrequencySpectrum s = dct2_forward(x);
    std::vector<double> bands(x.width() + x.height() - 1, 0.0);
    for (std::size_t i = 0; i < x.width(); ++i) {
        for (std::size_t j = 0; j < x.height(); ++j) bands[i + j] += s(i, j) * s(i, j);
    }
    return bands;
}

MetricReport evaluate(const MelGrid& hypothesis, const MelGrid& reference, const MelGrid& prior) {
    MetricReport r;
    r.rmse = rmse(hypothesis, reference);
    r.prior_rmse = rmse(prior, reference);
    r.improvement_ratio = r.prior_rmse > 0.0 ? r.rmse / r.prior_rmse : 0.0;
    r.frequency_energy = frequency_energy(hypothesis);
    return r;
}

Moments mc_moments(const std::function<double()>& sampler, std::size_t trials) {
    if (trials < 2) throw ValueError("mc_moments: need at least 2 trials");
    std::vector<double> xs(trials);
    for (double& x : xs) x = sampler();
    const double n = static_cast<double>(trials);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        const double d2 = (x - mean) * (x - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    m4 /= n;
    Moments out;
    out.trials = trials;
    out.mean = mean;
    out.variance = m2 / (n - 1.0);
    out.mean_stderr = std::sqrt(out.variance / n);
    const double pop_var = m2 / n;
    out.variance_stderr = std::sqrt(std::max(0.0, m4 - pop_var * pop_var) / n);
    return out;
}

}  // namespace ddk
