#pragma once

#include "ddk/grid.hpp"
#include "ddk/process.hpp"
#include "ddk/random.hpp"
#include "ddk/restorer.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace ddk {

enum class SamplerAlgorithm { Alg1, Alg2 };
enum class NoiseMode { TrajectoryFixed, FreshPerStep };

std::string_view to_string(SamplerAlgorithm a);
std::string_view to_string(NoiseMode m);
SamplerAlgorithm parse_sampler_algorithm(std::string_view name);
NoiseMode parse_noise_mode(std::string_view name);

/// Alg2 for Blurring, Alg1 for every other process.
SamplerAlgorithm default_algorithm(ProcessKind kind);

struct SamplerConfig {
    SamplerAlgorithm algorithm = SamplerAlgorithm::Alg1;
    NoiseMode noise_mode = NoiseMode::TrajectoryFixed;
    bool record_trajectory = false;

    static SamplerConfig defaults_for(ProcessKind kind) {
        return {default_algorithm(kind), NoiseMode::TrajectoryFixed, false};
    }
};

struct SampleResult {
    MelGrid x0_hat;
    /// When recorded: states X_N, X_{N-1}, ..., X_0 (N + 1 entries).
    std::optional<std::vector<MelGrid>> trajectory;
};

/// Restore-and-renoise loop:
///   X_N = corrupt(u); for n = N..1: x0_hat = R(X_n, u); X_{n-1} = noising(x0_hat, u, n-1).
/// Throws Error naming the step when a state becomes non-finite.
SampleResult sample_alg1(const ProcessConfig& process, const Restorer& restorer, const MelGrid& u,
                         RandomSource& rng, const SamplerConfig& config = {});

/// First-order corrected loop:
///   X_{n-1} = X_n - noising(x0_hat, u, n) + noising(x0_hat, u, n-1),
/// with the same noise draw used for both noising calls of a step.
SampleResult sample_alg2(const ProcessConfig& process, const Restorer& restorer, const MelGrid& u,
                         RandomSource& rng, const SamplerConfig& config = {});

/// Dispatches on config.algorithm.
SampleResult sample(const ProcessConfig& process, const Restorer& restorer, const MelGrid& u,
                    RandomSource& rng, const SamplerConfig& config);

}  // namespace ddk
