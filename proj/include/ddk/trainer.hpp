#pragma once

#include "ddk/conv_restorer.hpp"
#include "ddk/grid.hpp"
#include "ddk/process.hpp"
#include "ddk/random.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace ddk {

struct TrainingExample {
    MelGrid x0;
    MelGrid u;
};

/// Synthetic mel-like data: each x0 is a smooth positive envelope times a sum
/// of `harmonics` separable cosines with integer frequencies in
/// [1, max_frequency] per axis, min-max rescaled to [-1, 1]. The prior is
/// u = blur(x0, prior_blur_time).
struct SyntheticDatasetSpec {
    std::size_t count = 200;
    std::size_t width = 32;
    std::size_t height = 32;
    int harmonics = 3;
    int max_frequency = 4;
    double envelope_smoothness = 40.0;  // blur time applied to the envelope's random field
    double prior_blur_time = 8.0;
    std::uint64_t seed = 0;

    void validate() const;
};

std::vector<TrainingExample> make_synthetic_dataset(const SyntheticDatasetSpec& spec);

struct TrainConfig {
    int epochs = 300;
    std::size_t batch_size = 16;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
    /// Save a checkpoint every this many epochs (0 disables).
    int checkpoint_every = 0;
    std::filesystem::path checkpoint_path;

    void validate() const;
};

/// Adam moment estimates for one model.
class AdamOptimizer {
public:
    AdamOptimizer(std::size_t parameter_count, double learning_rate, double beta1 = 0.9,
                  double beta2 = 0.999, double epsilon = 1e-8);
    explicit AdamOptimizer(std::size_t parameter_count, const TrainConfig& config)
        : AdamOptimizer(parameter_count, config.learning_rate, config.beta1, config.beta2,
                        config.epsilon) {}

    void step(std::span<double> params, std::span<const double> grad);
    long long steps_taken() const noexcept { return t_; }

private:
    double lr_, b1_, b2_, eps_;
    long long t_ = 0;
    std::vector<double> m_, v_;
};

/// Raised when a training loss is not finite; carries the offending step index.
class TrainingError : public Error {
public:
    TrainingError(const std::string& what, int step) : Error(what), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

/// Clean-data MSE of one batch: for each item n ~ Uniform{1..N}, a fresh noise
/// draw, xn = noising(x0, u, n). Fills grad with the gradient of the mean loss.
double batch_loss_and_gradient(const ConvRestorerModel& model,
                               std::span<const TrainingExample> batch,
                               const ProcessConfig& process, RandomSource& rng,
                               std::span<double> grad);

/// One optimiser update on the batch; returns the batch's mean loss.
double train_step(ConvRestorerModel& model, AdamOptimizer& optimizer,
                  std::span<const TrainingExample> batch, const ProcessConfig& process,
                  RandomSource& rng);

struct TrainResult {
    std::vector<double> loss_history;  // one mean loss per epoch
};

using EpochCallback = std::function<void(int epoch, double loss)>;

/// Shuffles each epoch and runs train_step over consecutive batches.
TrainResult train_loop(ConvRestorerModel& model, std::span<const TrainingExample> dataset,
                       const ProcessConfig& process, const TrainConfig& config,
                       const EpochCallback& on_epoch = {});

/// Mean clean-data MSE over the dataset without updating the model.
double evaluate_loss(const ConvRestorerModel& model, std::span<const TrainingExample> dataset,
                     const ProcessConfig& process, RandomSource& rng);

}  // namespace ddk
