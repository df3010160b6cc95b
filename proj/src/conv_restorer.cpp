#include "ddk/conv_restorer.hpp"

#include "bytes.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

namespace ddk {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeights = Eigen::Map<const RowMatrix>;
using MutWeights = Eigen::Map<RowMatrix>;
constexpr int kTaps = ConvRestorerModel::kKernel * ConvRestorerModel::kKernel;

std::uint32_t fnv1a(const std::string& s) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : s) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

// Rows of the im2col matrix are (channel, ky, kx); columns are pixels i * H + j.
void im2col(const RowMatrix& in, Shape shape, RowMatrix& cols) {
    const auto w = static_cast<std::ptrdiff_t>(shape.width);
    const auto h = static_cast<std::ptrdiff_t>(shape.height);
    cols.setZero(in.rows() * kTaps, in.cols());
    for (Eigen::Index c = 0; c < in.rows(); ++c) {
        const double* src = in.row(c).data();
        for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
                double* dst = cols.row(c * kTaps + ky * 3 + kx).data();
                const std::ptrdiff_t di = ky - 1;
                const std::ptrdiff_t dj = kx - 1;
                const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, -dj);
                const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(h, h - dj);
                for (std::ptrdiff_t i = 0; i < w; ++i) {
                    const std::ptrdiff_t si = i + di;
                    if (si < 0 || si >= w) continue;
                    for (std::ptrdiff_t j = j_lo; j < j_hi; ++j) dst[i * h + j] = src[si * h + j + dj];
                }
            }
        }
    }
}

// Adjoint of im2col.
void col2im(const RowMatrix& cols, Eigen::Index channels, Shape shape, RowMatrix& out) {
    const auto w = static_cast<std::ptrdiff_t>(shape.width);
    const auto h = static_cast<std::ptrdiff_t>(shape.height);
    out.setZero(channels, cols.cols());
    for (Eigen::Index c = 0; c < channels; ++c) {
        double* dst = out.row(c).data();
        for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
                const double* src = cols.row(c * kTaps + ky * 3 + kx).data();
                const std::ptrdiff_t di = ky - 1;
                const std::ptrdiff_t dj = kx - 1;
                const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, -dj);
                const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(h, h - dj);
                for (std::ptrdiff_t i = 0; i < w; ++i) {
                    const std::ptrdiff_t si = i + di;
                    if (si < 0 || si >= w) continue;
                    for (std::ptrdiff_t j = j_lo; j < j_hi; ++j) dst[si * h + j + dj] += src[i * h + j];
                }
            }
        }
    }
}

// Buffers of one forward/backward pass. Reused across calls on the same
// thread so that training does not reallocate per item.
struct Workspace {
    Shape shape;
    RowMatrix input;                                    // 2 x P: (xn, u)
    std::array<RowMatrix, ConvRestorerModel::kLayers> cols;
    std::array<RowMatrix, ConvRestorerModel::kLayers - 1> activations;  // tanh outputs
    RowMatrix output;                                   // 1 x P, residual included
    RowMatrix dz, dcols, dact;
};

Workspace& thread_workspace() {
    thread_local Workspace ws;
    return ws;
}

ConstWeights weights_of(const ConvRestorerModel& m, const ConvRestorerModel::Layer& l) {
    return ConstWeights(m.parameters().data() + l.weight_offset, l.out_channels,
                        static_cast<Eigen::Index>(l.in_channels) * kTaps);
}

Eigen::Map<const Eigen::VectorXd> bias_of(const ConvRestorerModel& m, const ConvRestorerModel::Layer& l) {
    return {m.parameters().data() + l.bias_offset, l.out_channels};
}

void forward_pass(const ConvRestorerModel& model, const MelGrid& xn, const MelGrid& u, Workspace& ws) {
    require_same_shape(xn, u, "conv_forward");
    ws.shape = xn.shape();
    const auto pixels = static_cast<Eigen::Index>(xn.size());
    ws.input.resize(2, pixels);
    ws.input.row(0) = Eigen::Map<const Eigen::RowVectorXd>(xn.data(), pixels);
    ws.input.row(1) = Eigen::Map<const Eigen::RowVectorXd>(u.data(), pixels);

    const RowMatrix* current = &ws.input;
    for (int l = 0; l < ConvRestorerModel::kLayers; ++l) {
        const auto& layer = model.layer(l);
        const auto li = static_cast<std::size_t>(l);
        im2col(*current, ws.shape, ws.cols[li]);
        RowMatrix& z = l + 1 < ConvRestorerModel::kLayers ? ws.activations[li] : ws.output;
        z.resize(layer.out_channels, pixels);
        z.noalias() = weights_of(model, layer) * ws.cols[li];
        z.colwise() += bias_of(model, layer);
        if (l + 1 < ConvRestorerModel::kLayers) {
            z = z.array().tanh();
            current = &z;
        } else {
            z.row(0) += ws.input.row(1);
        }
    }
}

// Backpropagates weight * grad_out through the stack held in ws, accumulating
// parameter gradients into grad. Leaves d(input) (2 x P) in ws.dact.
void backward_pass(const ConvRestorerModel& model, Workspace& ws, const RowMatrix& grad_out,
                   std::span<double> grad, double weight) {
    ws.dz = weight * grad_out;
    for (int l = ConvRestorerModel::kLayers - 1; l >= 0; --l) {
        const auto& layer = model.layer(l);
        const auto li = static_cast<std::size_t>(l);
        MutWeights(grad.data() + layer.weight_offset, layer.out_channels,
                   static_cast<Eigen::Index>(layer.in_channels) * kTaps)
            .noalias() += ws.dz * ws.cols[li].transpose();
        Eigen::Map<Eigen::VectorXd>(grad.data() + layer.bias_offset, layer.out_channels) +=
            ws.dz.rowwise().sum();
        ws.dcols.resize(static_cast<Eigen::Index>(layer.in_channels) * kTaps, ws.dz.cols());
        ws.dcols.noalias() = weights_of(model, layer).transpose() * ws.dz;
        col2im(ws.dcols, layer.in_channels, ws.shape, ws.dact);
        if (l > 0) {
            const RowMatrix& a = ws.activations[li - 1];
            ws.dz = ws.dact.array() * (1.0 - a.array().square());
        }
    }
}

MelGrid row_to_grid(const RowMatrix& m, Eigen::Index row, Shape shape) {
    MelGrid g = MelGrid::zeros(shape);
    Eigen::Map<Eigen::RowVectorXd>(g.data(), static_cast<Eigen::Index>(g.size())) = m.row(row);
    return g;
}

}  // namespace

ConvRestorerModel::ConvRestorerModel(int hidden_channels) : hidden_(hidden_channels) {
    if (hidden_channels < 1) throw ValueError("ConvRestorerModel: hidden_channels must be >= 1");
    const int channels[kLayers + 1] = {2, hidden_, hidden_, hidden_, 1};
    std::size_t offset = 0;
    for (int l = 0; l < kLayers; ++l) {
        Layer layer{channels[l], channels[l + 1], offset, 0};
        offset += static_cast<std::size_t>(layer.out_channels * layer.in_channels * kTaps);
        layer.bias_offset = offset;
        offset += static_cast<std::size_t>(layer.out_channels);
        layers_.push_back(layer);
    }
    params_.assign(offset, 0.0);
}

ConvRestorerModel ConvRestorerModel::random(RandomSource& rng, int hidden_channels) {
    ConvRestorerModel m(hidden_channels);
    for (const auto& layer : m.layers_) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(layer.in_channels * kTaps));
        for (std::size_t k = layer.weight_offset; k < layer.bias_offset; ++k) {
            m.params_[k] = scale * rng.normal();
        }
    }
    return m;
}

std::size_t ConvRestorerModel::parameter_count_for(int hidden_channels) {
    const auto c = static_cast<std::size_t>(hidden_channels);
    return (2 * c * kTaps + c) + 2 * (c * c * kTaps + c) + (c * kTaps + 1);
}

std::uint32_t ConvRestorerModel::architecture_hash() const {
    const std::string c = std::to_string(hidden_);
    return fnv1a("ddk-conv-restorer;kernel=3x3;padding=same;channels=2-" + c + "-" + c + "-" + c +
                 "-1;hidden=tanh;output=identity;residual=u");
}

MelGrid ConvRestorerModel::predict(const MelGrid& xn, const MelGrid& u) const {
    return conv_forward(*this, xn, u);
}

MelGrid conv_forward(const ConvRestorerModel& model, const MelGrid& xn, const MelGrid& u) {
    Workspace& ws = thread_workspace();
    forward_pass(model, xn, u, ws);
    return row_to_grid(ws.output, 0, ws.shape);
}

ConvGradients conv_backward(const ConvRestorerModel& model, const MelGrid& xn, const MelGrid& u,
                            const MelGrid& grad_out) {
    require_same_shape(xn, grad_out, "conv_backward");
    Workspace& ws = thread_workspace();
    forward_pass(model, xn, u, ws);
    ConvGradients g{std::vector<double>(model.parameter_count(), 0.0), MelGrid{}, MelGrid{}};
    const auto pixels = static_cast<Eigen::Index>(grad_out.size());
    const RowMatrix gout = Eigen::Map<const Eigen::RowVectorXd>(grad_out.data(), pixels);
    backward_pass(model, ws, gout, g.parameters, 1.0);
    g.xn = row_to_grid(ws.dact, 0, ws.shape);
    g.u = row_to_grid(ws.dact, 1, ws.shape) + grad_out;
    return g;
}

double conv_mse_and_gradient(const ConvRestorerModel& model, const MelGrid& xn, const MelGrid& u,
                             const MelGrid& target, std::span<double> grad, double weight) {
    require_same_shape(xn, target, "conv_mse_and_gradient");
    if (grad.size() != model.parameter_count()) {
        throw ShapeError("conv_mse_and_gradient: gradient buffer has wrong size");
    }
    Workspace& ws = thread_workspace();
    forward_pass(model, xn, u, ws);
    const auto pixels = static_cast<Eigen::Index>(target.size());
    const RowMatrix residual =
        ws.output - Eigen::Map<const Eigen::RowVectorXd>(target.data(), pixels);
    const double mse = residual.squaredNorm() / static_cast<double>(pixels);
    backward_pass(model, ws, (2.0 / static_cast<double>(pixels)) * residual, grad, weight);
    return mse;
}

std::vector<std::uint8_t> encode_model(const ConvRestorerModel& model) {
    std::vector<std::uint8_t> out{'D', 'D', 'K', 'M'};
    bytes::put_u32(out, kModelFormatVersion);
    bytes::put_u32(out, model.architecture_hash());
    for (double p : model.parameters()) bytes::put_f64(out, p);
    return out;
}

ConvRestorerModel decode_model(std::span<const std::uint8_t> in) {
    if (in.size() < 12 || in[0] != 'D' || in[1] != 'D' || in[2] != 'K' || in[3] != 'M') {
        throw ValueError("model file: bad magic at byte offset 0 (expected \"DDKM\")");
    }
    const std::uint32_t version = bytes::get_u32(in, 4);
    if (version != kModelFormatVersion) {
        throw ValueError("model file: unsupported format version " + std::to_string(version) +
                         " at byte offset 4");
    }
    const std::size_t payload = in.size() - 12;
    if (payload % 8 != 0) {
        throw ValueError("model file: payload of " + std::to_string(payload) +
                         " bytes at byte offset 12 is not a whole number of float64 values");
    }
    const std::size_t count = payload / 8;
    // Recover the hidden width from the parameter count, then confirm via the hash.
    int hidden = 1;
    while (ConvRestorerModel::parameter_count_for(hidden) < count && hidden < 4096) ++hidden;
    if (ConvRestorerModel::parameter_count_for(hidden) != count) {
        throw ValueError("model file: " + std::to_string(count) +
                         " parameters do not match any supported architecture");
    }
    ConvRestorerModel model(hidden);
    if (bytes::get_u32(in, 8) != model.architecture_hash()) {
        throw ValueError("model file: architecture hash mismatch at byte offset 8");
    }
    auto params = model.parameters();
    for (std::size_t k = 0; k < count; ++k) {
        params[k] = bytes::get_f64(in, 12 + 8 * k);
        if (!std::isfinite(params[k])) {
            throw ValueError("model file: non-finite parameter at byte offset " +
                             std::to_string(12 + 8 * k));
        }
    }
    return model;
}

void save_model(const ConvRestorerModel& model, const std::filesystem::path& path) {
    bytes::write_file(path, encode_model(model));
}

ConvRestorerModel load_model(const std::filesystem::path& path) {
    return decode_model(bytes::read_file(path));
}

}  // namespace ddk
