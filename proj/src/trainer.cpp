#include "ddk/trainer.hpp"

#include "ddk/dct.hpp"
#include "ddk/noising.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ddk {

void SyntheticDatasetSpec::validate() const {
    if (width < 1 || height < 1) throw ValueError("data: W and H must be >= 1");
    if (harmonics < 1) throw ValueError("data: harmonics must be >= 1");
    if (max_frequency < 1) throw ValueError("data: max_frequency must be >= 1");
    if (!(envelope_smoothness >= 0.0)) throw ValueError("data: envelope_smoothness must be >= 0");
    if (!(prior_blur_time >= 0.0) || !std::isfinite(prior_blur_time)) {
        throw ValueError("data: prior_blur_time must be finite and >= 0");
    }
}

std::vector<TrainingExample> make_synthetic_dataset(const SyntheticDatasetSpec& spec) {
    spec.validate();
    RandomSource rng(spec.seed);
    const Shape shape{spec.width, spec.height};
    const double pi = std::numbers::pi;
    std::vector<TrainingExample> out;
    out.reserve(spec.count);
    for (std::size_t s = 0; s < spec.count; ++s) {
        MelGrid field = blur(standard_normal_grid(shape, rng), spec.envelope_smoothness);
        field -= MelGrid::constant(shape, field.mean());
        const double field_scale = std::max(field.max_abs(), 1e-12);

        MelGrid x0 = MelGrid::zeros(shape);
        for (int k = 0; k < spec.harmonics; ++k) {
            const double amp = 0.5 + rng.uniform01();
            const double p = static_cast<double>(rng.uniform_int(1, spec.max_frequency));
            const double q = static_cast<double>(rng.uniform_int(1, spec.max_frequency));
            const double phase_i = 2.0 * pi * rng.uniform01();
            const double phase_j = 2.0 * pi * rng.uniform01();
            for (std::size_t i = 0; i < spec.width; ++i) {
                const double ci = std::cos(pi * p * (i + 0.5) / spec.width + phase_i);
                for (std::size_t j = 0; j < spec.height; ++j) {
                    x0(i, j) += amp * ci * std::cos(pi * q * (j + 0.5) / spec.height + phase_j);
                }
            }
        }
        auto xv = x0.values();
        auto fv = field.values();
        for (std::size_t k = 0; k < xv.size(); ++k) xv[k] *= 1.0 + 0.5 * std::tanh(fv[k] / field_scale);

        const auto [lo, hi] = std::minmax_element(xv.begin(), xv.end());
        const double vmin = *lo;
        const double span = *hi - vmin;
        for (double& v : xv) v = span > 0.0 ? 2.0 * (v - vmin) / span - 1.0 : 0.0;

        MelGrid u = blur(x0, spec.prior_blur_time);
        out.push_back({std::move(x0), std::move(u)});
    }
    return out;
}

void TrainConfig::validate() const {
    if (epochs < 0) throw ValueError("train.epochs must be >= 0");
    if (batch_size < 1) throw ValueError("train.batch_size must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ValueError("train.learning_rate must be > 0");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
        throw ValueError("train: invalid Adam moment parameters");
    }
    if (checkpoint_every < 0) throw ValueError("train.checkpoint_every must be >= 0");
}

AdamOptimizer::AdamOptimizer(std::size_t parameter_count, double learning_rate, double beta1,
                             double beta2, double epsilon)
    : lr_(learning_rate), b1_(beta1), b2_(beta2), eps_(epsilon), m_(parameter_count, 0.0),
      v_(parameter_count, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw ShapeError("AdamOptimizer::step: parameter count mismatch");
    }
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
        m_[k] = b1_ * m_[k] + (1.0 - b1_) * grad[k];
        v_[k] = b2_ * v_[k] + (1.0 - b2_) * grad[k] * grad[k];
        params[k] -= lr_ * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + eps_);
    }
}

double batch_loss_and_gradient(const ConvRestorerModel& model,
                               std::span<const TrainingExample> batch,
                               const ProcessConfig& process, RandomSource& rng,
                               std::span<double> grad) {
    if (batch.empty()) throw ValueError("train_step: empty batch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const double weight = 1.0 / static_cast<double>(batch.size());
    double total = 0.0;
    for (const auto& item : batch) {
        const int n = static_cast<int>(rng.uniform_int(1, process.steps));
        const NoiseDraw draw = draw_noise(process, item.x0.shape(), rng);
        const MelGrid xn = noising(process, item.x0, item.u, n, draw);
        const double loss = conv_mse_and_gradient(model, xn, item.u, item.x0, grad, weight);
        if (!std::isfinite(loss)) {
            throw TrainingError("non-finite training loss at step n=" + std::to_string(n), n);
        }
        total += loss;
    }
    return total * weight;
}

double train_step(ConvRestorerModel& model, AdamOptimizer& optimizer,
                  std::span<const TrainingExample> batch, const ProcessConfig& process,
                  RandomSource& rng) {
    std::vector<double> grad(model.parameter_count());
    const double loss = batch_loss_and_gradient(model, batch, process, rng, grad);
    optimizer.step(model.parameters(), grad);
    return loss;
}

TrainResult train_loop(ConvRestorerModel& model, std::span<const TrainingExample> dataset,
                       const ProcessConfig& process, const TrainConfig& config,
                       const EpochCallback& on_epoch) {
    config.validate();
    process.validate();
    TrainResult result;
    if (config.epochs == 0) return result;
    if (dataset.empty()) throw ValueError("train_loop: empty dataset");

    RandomSource rng(config.seed);
    AdamOptimizer optimizer(model.parameter_count(), config);
    std::vector<std::size_t> order(dataset.size());
    std::vector<TrainingExample> batch;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        for (std::size_t k = order.size(); k > 1; --k) {
            const auto r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(k) - 1));
            std::swap(order[k - 1], order[r]);
        }
        double weighted = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            batch.clear();
            for (std::size_t k = start; k < stop; ++k) batch.push_back(dataset[order[k]]);
            weighted += train_step(model, optimizer, batch, process, rng) *
                        static_cast<double>(stop - start);
        }
        const double epoch_loss = weighted / static_cast<double>(order.size());
        result.loss_history.push_back(epoch_loss);
        if (on_epoch) on_epoch(epoch, epoch_loss);
        if (config.checkpoint_every > 0 && epoch % config.checkpoint_every == 0 &&
            !config.checkpoint_path.empty()) {
            save_model(model, config.checkpoint_path);
        }
    }
    return result;
}

double evaluate_loss(const ConvRestorerModel& model, std::span<const TrainingExample> dataset,
                     const ProcessConfig& process, RandomSource& rng) {
    if (dataset.empty()) throw ValueError("evaluate_loss: empty dataset");
    double total = 0.0;
    for (const auto& item : dataset) {
        const int n = static_cast<int>(rng.uniform_int(1, process.steps));
        const NoiseDraw draw = draw_noise(process, item.x0.shape(), rng);
        const MelGrid xn = noising(process, item.x0, item.u, n, draw);
        const MelGrid pred = model.predict(xn, item.u);
        double se = 0.0;
        for (std::size_t k = 0; k < pred.size(); ++k) {
            const double d = pred.values()[k] - item.x0.values()[k];
            se += d * d;
        }
        total += se / static_cast<double>(pred.size());
    }
    return total / static_cast<double>(dataset.size());
}

}  // namespace ddk
