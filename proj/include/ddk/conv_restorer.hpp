#pragma once

#include "ddk/grid.hpp"
#include "ddk/random.hpp"
#include "ddk/restorer.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ddk {

/// Four 3x3 "same"-padded convolutions, channels 2 -> C -> C -> C -> 1 with
/// C = hidden_channels (32 by default), tanh on the hidden layers, identity on
/// the output, plus a residual connection adding u to the output. The input
/// channels are the stacked (xn, u).
///
/// Parameters live in one flat vector, layer by layer; each layer stores its
/// weights as [out][in][ky][kx] followed by its [out] biases.
class ConvRestorerModel final : public Restorer {
public:
    static constexpr int kKernel = 3;
    static constexpr int kLayers = 4;
    static constexpr int kDefaultHidden = 32;

    struct Layer {
        int in_channels;
        int out_channels;
        std::size_t weight_offset;
        std::size_t bias_offset;
    };

    /// All parameters zero: the model then predicts u exactly.
    explicit ConvRestorerModel(int hidden_channels = kDefaultHidden);

    /// LeCun-normal weights (std 1 / sqrt(fan_in)), zero biases.
    static ConvRestorerModel random(RandomSource& rng, int hidden_channels = kDefaultHidden);

    /// Number of parameters of the architecture with the given hidden width.
    static std::size_t parameter_count_for(int hidden_channels);

    int hidden_channels() const noexcept { return hidden_; }
    const Layer& layer(int index) const { return layers_.at(static_cast<std::size_t>(index)); }
    std::size_t parameter_count() const noexcept { return params_.size(); }
    std::span<double> parameters() noexcept { return params_; }
    std::span<const double> parameters() const noexcept { return params_; }

    /// FNV-1a hash of the architecture descriptor; stored in model files.
    std::uint32_t architecture_hash() const;

    MelGrid predict(const MelGrid& xn, const MelGrid& u) const override;

    friend bool operator==(const ConvRestorerModel& a, const ConvRestorerModel& b) {
        return a.hidden_ == b.hidden_ && a.params_ == b.params_;
    }

private:
    int hidden_;
    std::vector<Layer> layers_;
    std::vector<double> params_;
};

struct ConvGradients {
    std::vector<double> parameters;  // same layout as the model
    MelGrid xn;                      // d/d xn
    MelGrid u;                       // d/d u, residual path included
};

MelGrid conv_forward(const ConvRestorerModel& model, const MelGrid& xn, const MelGrid& u);

/// Exact gradients of sum(grad_out * conv_forward(model, xn, u)).
ConvGradients conv_backward(const ConvRestorerModel& model, const MelGrid& xn, const MelGrid& u,
                            const MelGrid& grad_out);

/// Mean squared error of conv_forward(xn, u) against target, and its parameter
/// gradient accumulated into grad (scaled by weight). One forward pass.
double conv_mse_and_gradient(const ConvRestorerModel& model, const MelGrid& xn, const MelGrid& u,
                             const MelGrid& target, std::span<double> grad, double weight = 1.0);

// Model file: "DDKM", u32 version, u32 architecture hash, then every parameter
// as a little-endian IEEE-754 binary64 in the layout above.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const ConvRestorerModel& model, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_model(const ConvRestorerModel& model);
/// Throws ValueError on bad magic, version, hash or length.
ConvRestorerModel decode_model(std::span<const std::uint8_t> bytes);
ConvRestorerModel load_model(const std::filesystem::path& path);

}  // namespace ddk
