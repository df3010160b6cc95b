#include "ddk/sampler.hpp"

#include "ddk/noising.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace ddk {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void check_finite(const MelGrid& x, int step, const char* what) {
    if (!x.all_finite()) {
        throw Error(std::string("sampler: non-finite ") + what + " at step n=" + std::to_string(step));
    }
}

template <typename Update>
SampleResult run_loop(const ProcessConfig& process, const Restorer& restorer, const MelGrid& u,
                      RandomSource& rng, const SamplerConfig& config, Update update) {
    process.validate();
    if (!u.all_finite()) throw ValueError("sampler: prior contains non-finite values");
    auto [state, draw] = corrupt(process, u, rng);
    check_finite(state, process.steps, "initial sample");

    SampleResult result;
    if (config.record_trajectory) {
        result.trajectory.emplace();
        result.trajectory->reserve(static_cast<std::size_t>(process.steps) + 1);
        result.trajectory->push_back(state);
    }
    for (int n = process.steps; n >= 1; --n) {
        const MelGrid x0_hat = restorer.predict(state, u);
        require_same_shape(x0_hat, u, "restorer output");
        check_finite(x0_hat, n, "restorer output");
        const NoiseDraw step_draw =
            config.noise_mode == NoiseMode::TrajectoryFixed ? draw : draw_noise(process, u.shape(), rng);
        state = update(state, x0_hat, n, step_draw);
        check_finite(state, n - 1, "state");
        if (result.trajectory) result.trajectory->push_back(state);
    }
    result.x0_hat = std::move(state);
    return result;
}

}  // namespace

std::string_view to_string(SamplerAlgorithm a) { return a == SamplerAlgorithm::Alg1 ? "Alg1" : "Alg2"; }

std::string_view to_string(NoiseMode m) {
    return m == NoiseMode::TrajectoryFixed ? "TrajectoryFixed" : "FreshPerStep";
}

SamplerAlgorithm parse_sampler_algorithm(std::string_view name) {
    const auto n = lower(name);
    if (n == "alg1") return SamplerAlgorithm::Alg1;
    if (n == "alg2") return SamplerAlgorithm::Alg2;
    throw ValueError("unknown sampler algorithm '" + std::string(name) + "' (expected Alg1 or Alg2)");
}

NoiseMode parse_noise_mode(std::string_view name) {
    const auto n = lower(name);
    if (n == "trajectoryfixed") return NoiseMode::TrajectoryFixed;
    if (n == "freshperstep") return NoiseMode::FreshPerStep;
    throw ValueError("unknown noise mode '" + std::string(name) +
                     "' (expected TrajectoryFixed or FreshPerStep)");
}

SamplerAlgorithm default_algorithm(ProcessKind kind) {
    return kind == ProcessKind::Blurring ? SamplerAlgorithm::Alg2 : SamplerAlgorithm::Alg1;
}

SampleResult sample_alg1(const ProcessConfig& process, const Restorer& restorer, const MelGrid& u,
                         RandomSource& rng, const SamplerConfig& config) {
    return run_loop(process, restorer, u, rng, config,
                    [&](const MelGrid&, const MelGrid& x0_hat, int n, const NoiseDraw& draw) {
                        return noising(process, x0_hat, u, n - 1, draw);
                    });
}

SampleResult sample_alg2(const ProcessConfig& process, const Restorer& restorer, const MelGrid& u,
                         RandomSource& rng, const SamplerConfig& config) {
    return run_loop(process, restorer, u, rng, config,
                    [&](const MelGrid& state, const MelGrid& x0_hat, int n, const NoiseDraw& draw) {
                        MelGrid next = state - noising(process, x0_hat, u, n, draw);
                        next += noising(process, x0_hat, u, n - 1, draw);
                        return next;
                    });
}

SampleResult sample(const ProcessConfig& process, const Restorer& restorer, const MelGrid& u,
                    RandomSource& rng, const SamplerConfig& config) {
    return config.algorithm == SamplerAlgorithm::Alg1 ? sample_alg1(process, restorer, u, rng, config)
                                                      : sample_alg2(process, restorer, u, rng, config);
}

}  // namespace ddk
