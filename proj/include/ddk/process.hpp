#pragma once

#include "ddk/grid.hpp"
#include "ddk/random.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace ddk {

enum class ProcessKind { GradTtsDt, Rfag, Rfmg, Blurring, Mixture };

std::string_view to_string(ProcessKind kind);
/// Accepts the canonical names ("GradTtsDt", "Rfag", ...), case-insensitively.
ProcessKind parse_process_kind(std::string_view name);

/// Selects one of the five noising processes and its parameters.
struct ProcessConfig {
    ProcessKind kind = ProcessKind::Rfag;
    int steps = 10;               // N
    double sigma = 0.6;           // unused by GradTtsDt, Blurring and Mixture
    double beta0 = 0.05;          // GradTtsDt only
    double beta1 = 20.0;          // GradTtsDt only
    double mixture_scale = 0.5;   // Mixture only

    /// Throws ValueError on N < 1, sigma < 0, beta0 <= 0, beta1 <= beta0,
    /// mixture_scale <= 0 or any non-finite parameter.
    void validate() const;
};

/// Discrete step n, checked against [0, N] at construction.
class StepIndex {
public:
    StepIndex(int n, int steps);
    int value() const noexcept { return n_; }
    int steps() const noexcept { return steps_; }
    /// n / N as a double; exactly 0.0 at n = 0 and exactly 1.0 at n = N.
    double fraction() const noexcept { return static_cast<double>(n_) / steps_; }

private:
    int n_;
    int steps_;
};

/// Linear beta schedule of the variance-preserving process, with n mapped to
/// continuous time t = n / N.
struct BetaSchedule {
    double beta0 = 0.05;
    double beta1 = 20.0;
    int steps = 10;

    static BetaSchedule from(const ProcessConfig& config) {
        return {config.beta0, config.beta1, config.steps};
    }

    double beta(double t) const noexcept { return beta0 + (beta1 - beta0) * t; }
    /// Integral of beta over [0, n / N].
    double rho(int n) const noexcept;
};

/// The frozen random tensors of one trajectory. Only the tensors used by the
/// process kind are present.
struct NoiseDraw {
    std::optional<MelGrid> eps1;      // Rfag: additive noise, scaled by sigma
    std::optional<MelGrid> eps2;      // Rfmg: used as 1 + sigma * eps2
    std::optional<MelGrid> z_signal;  // GradTtsDt: Brownian endpoint surrogate
    std::optional<MelGrid> z_freq;    // Mixture: frequency-indexed Gaussian

    bool empty() const noexcept { return !eps1 && !eps2 && !z_signal && !z_freq; }
    friend bool operator==(const NoiseDraw&, const NoiseDraw&) = default;
};

/// Draws exactly the tensors required by config.kind, each from rng in
/// row-major order.
NoiseDraw draw_noise(const ProcessConfig& config, Shape shape, RandomSource& rng);

MelGrid standard_normal_grid(Shape shape, RandomSource& rng);

}  // namespace ddk
