#include "ddk/noising.hpp"

#include "ddk/dct.hpp"

#include <cmath>

namespace ddk {
namespace {

const MelGrid& require_tensor(const std::optional<MelGrid>& t, const char* name,
                              const MelGrid& like) {
    if (!t) throw ValueError(std::string("noise draw is missing ") + name);
    require_same_shape(like, *t, name);
    return *t;
}

// (1 - t) a + t b, computed entrywise in that order.
MelGrid lerp(const MelGrid& a, const MelGrid& b, double t) {
    MelGrid out = a;
    auto o = out.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = (1.0 - t) * o[k] + t * bv[k];
    return out;
}

MelGrid rfag_endpoint(const MelGrid& u, double sigma, const MelGrid& eps1) {
    MelGrid out = u;
    auto o = out.values();
    auto e = eps1.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = sigma * e[k] + o[k];
    return out;
}

MelGrid rfmg_endpoint(const MelGrid& u, double sigma, const MelGrid& eps2) {
    MelGrid out = u;
    auto o = out.values();
    auto e = eps2.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = (1.0 + sigma * e[k]) * o[k];
    return out;
}

}  // namespace

MelGrid grad_tts_dt(const MelGrid& x0, const MelGrid& u, StepIndex n,
                    const BetaSchedule& schedule, const MelGrid& z_signal) {
    if (n.value() == 0) return x0;
    const double rho = schedule.rho(n.value());
    const double keep = std::exp(-0.5 * rho);
    const double noise_std = std::sqrt(-std::expm1(-rho));
    MelGrid out = x0;
    auto o = out.values();
    auto uv = u.values();
    auto z = z_signal.values();
    for (std::size_t k = 0; k < o.size(); ++k) {
        o[k] = (1.0 - keep) * uv[k] + keep * o[k] + noise_std * z[k];
    }
    return out;
}

MelGrid rfag(const MelGrid& x0, const MelGrid& u, StepIndex n, double sigma, const MelGrid& eps1) {
    if (n.value() == 0) return x0;
    MelGrid endpoint = rfag_endpoint(u, sigma, eps1);
    if (n.value() == n.steps()) return endpoint;
    return lerp(x0, endpoint, n.fraction());
}

MelGrid rfmg(const MelGrid& x0, const MelGrid& u, StepIndex n, double sigma, const MelGrid& eps2) {
    if (n.value() == 0) return x0;
    MelGrid endpoint = rfmg_endpoint(u, sigma, eps2);
    if (n.value() == n.steps()) return endpoint;
    return lerp(x0, endpoint, n.fraction());
}

MelGrid blurring_path(const MelGrid& x0, const MelGrid& u, StepIndex n) {
    if (n.value() == 0) return x0;
    if (n.value() == n.steps()) return u;
    return lerp(blur(x0, n.value()), u, n.fraction());
}

MelGrid mixture_noise(const MelGrid& x0, double n, double scale, const MelGrid& z_freq) {
    require_same_shape(x0, z_freq, "mixture_noise");
    if (!(scale >= 0.0)) throw ValueError("mixture_noise: scale must be >= 0");
    FrequencySpectrum s = dct2_forward(x0);
    const HeatEigenvalues ev = heat_eigenvalues(x0.width(), x0.height());
    auto coef = s.coefficients.values();
    auto lam = ev.lambda.values();
    auto z = z_freq.values();
    for (std::size_t k = 0; k < coef.size(); ++k) {
        coef[k] = std::exp(lam[k] * n) * coef[k] + std::sqrt(scale * -lam[k]) * z[k];
    }
    return dct2_inverse(s);
}

MelGrid mixture_path(const MelGrid& x0, const MelGrid& u, StepIndex n, double scale,
                     const MelGrid& z_freq) {
    if (n.value() == 0) return x0;
    if (n.value() == n.steps()) return u;
    return lerp(mixture_noise(x0, n.value(), scale, z_freq), u, n.fraction());
}

MelGrid noising(const ProcessConfig& config, const MelGrid& x0, const MelGrid& u, int n,
                const NoiseDraw& draw) {
    config.validate();
    require_same_shape(x0, u, "noising(x0, u)");
    const StepIndex step(n, config.steps);
    switch (config.kind) {
        case ProcessKind::GradTtsDt:
            return grad_tts_dt(x0, u, step, BetaSchedule::from(config),
                               require_tensor(draw.z_signal, "z_signal", x0));
        case ProcessKind::Rfag:
            return rfag(x0, u, step, config.sigma, require_tensor(draw.eps1, "eps1", x0));
        case ProcessKind::Rfmg:
            return rfmg(x0, u, step, config.sigma, require_tensor(draw.eps2, "eps2", x0));
        case ProcessKind::Blurring:
            return blurring_path(x0, u, step);
        case ProcessKind::Mixture:
            return mixture_path(x0, u, step, config.mixture_scale,
                                require_tensor(draw.z_freq, "z_freq", x0));
    }
    throw ValueError("noising: unknown process kind");
}

std::pair<MelGrid, NoiseDraw> corrupt(const ProcessConfig& config, const MelGrid& u,
                                      RandomSource& rng) {
    config.validate();
    if (!u.all_finite()) throw ValueError("corrupt: prior contains non-finite values");
    NoiseDraw draw = draw_noise(config, u.shape(), rng);
    switch (config.kind) {
        case ProcessKind::GradTtsDt: {
            const double rho = BetaSchedule::from(config).rho(config.steps);
            const double keep = std::exp(-0.5 * rho);
            const double noise_std = std::sqrt(-std::expm1(-rho));
            MelGrid out = u;
            auto o = out.values();
            auto z = draw.z_signal->values();
            for (std::size_t k = 0; k < o.size(); ++k) o[k] = (1.0 - keep) * o[k] + noise_std * z[k];
            return {std::move(out), std::move(draw)};
        }
        case ProcessKind::Rfag: {
            MelGrid out = rfag_endpoint(u, config.sigma, *draw.eps1);
            return {std::move(out), std::move(draw)};
        }
        case ProcessKind::Rfmg: {
            MelGrid out = rfmg_endpoint(u, config.sigma, *draw.eps2);
            return {std::move(out), std::move(draw)};
        }
        case ProcessKind::Blurring:
        case ProcessKind::Mixture:
            return {u, std::move(draw)};
    }
    throw ValueError("corrupt: unknown process kind");
}

}  // namespace ddk
