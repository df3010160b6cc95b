#include "ddk/process.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

namespace ddk {
namespace {

constexpr std::array<std::pair<ProcessKind, std::string_view>, 5> kKindNames{{
    {ProcessKind::GradTtsDt, "GradTtsDt"},
    {ProcessKind::Rfag, "Rfag"},
    {ProcessKind::Rfmg, "Rfmg"},
    {ProcessKind::Blurring, "Blurring"},
    {ProcessKind::Mixture, "Mixture"},
}};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::string_view to_string(ProcessKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

ProcessKind parse_process_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (iequals(n, name)) return k;
    }
    throw ValueError("unknown process kind '" + std::string(name) +
                     "' (expected GradTtsDt, Rfag, Rfmg, Blurring or Mixture)");
}

void ProcessConfig::validate() const {
    if (steps < 1) throw ValueError("process.N must be >= 1, got " + std::to_string(steps));
    if (!std::isfinite(sigma) || sigma < 0.0) throw ValueError("process.sigma must be finite and >= 0");
    if (!std::isfinite(beta0) || beta0 <= 0.0) throw ValueError("process.beta0 must be > 0");
    if (!std::isfinite(beta1) || beta1 <= beta0) throw ValueError("process.beta1 must exceed beta0");
    if (!std::isfinite(mixture_scale) || mixture_scale <= 0.0) {
        throw ValueError("process.mixture_scale must be > 0");
    }
}

StepIndex::StepIndex(int n, int steps) : n_(n), steps_(steps) {
    if (steps < 1) throw ValueError("StepIndex: N must be >= 1");
    if (n < 0 || n > steps) {
        throw ValueError("step index n=" + std::to_string(n) + " outside [0, " +
                         std::to_string(steps) + "]");
    }
}

double BetaSchedule::rho(int n) const noexcept {
    const double t = static_cast<double>(n) / steps;
    return beta0 * t + 0.5 * (beta1 - beta0) * t * t;
}

MelGrid standard_normal_grid(Shape shape, RandomSource& rng) {
    MelGrid g = MelGrid::zeros(shape);
    for (double& v : g.values()) v = rng.normal();
    return g;
}

NoiseDraw draw_noise(const ProcessConfig& config, Shape shape, RandomSource& rng) {
    NoiseDraw draw;
    switch (config.kind) {
        case ProcessKind::GradTtsDt: draw.z_signal = standard_normal_grid(shape, rng); break;
        case ProcessKind::Rfag: draw.eps1 = standard_normal_grid(shape, rng); break;
        case ProcessKind::Rfmg: draw.eps2 = standard_normal_grid(shape, rng); break;
        case ProcessKind::Blurring: break;
        case ProcessKind::Mixture: draw.z_freq = standard_normal_grid(shape, rng); break;
    }
    return draw;
}

}  // namespace ddk
