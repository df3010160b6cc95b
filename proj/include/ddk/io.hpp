#pragma once

#include "ddk/grid.hpp"
#include "ddk/metrics.hpp"
#include "ddk/process.hpp"
#include "ddk/sampler.hpp"
#include "ddk/trainer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ddk {

/// Malformed file contents; the message carries the byte offset of the fault.
class FormatError : public ValueError {
public:
    FormatError(const std::string& what, std::size_t offset)
        : ValueError(what + " (byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// GridFile: "DDK1", u32 W, u32 H, u32 reserved = 0, then W * H little-endian
// float32 values, row-major. Values are rounded to float32 on write.
inline constexpr std::size_t kGridHeaderBytes = 16;

std::vector<std::uint8_t> encode_grid(const MelGrid& x);
MelGrid decode_grid(std::span<const std::uint8_t> bytes);
void write_grid(const MelGrid& x, const std::filesystem::path& path);
MelGrid read_grid(const std::filesystem::path& path);

/// Binary PGM (P5): H rows by W columns, the lowest frequency bin on the bottom
/// row, linear min-max mapping to 0..255. A constant grid renders as 128.
std::vector<std::uint8_t> render_heatmap(const MelGrid& x);

/// Fully resolved experiment configuration. Every field has a default.
struct ExperimentConfig {
    ProcessConfig process;
    /// Unset means the per-process default (Alg2 for Blurring, else Alg1).
    std::optional<SamplerAlgorithm> algorithm;
    NoiseMode noise_mode = NoiseMode::TrajectoryFixed;
    TrainConfig train;
    SyntheticDatasetSpec data;

    SamplerConfig sampler_config() const;
};

/// Parses the JSON config. Unknown keys and wrong value types are rejected
/// with ValueError; omitted keys keep their defaults.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string experiment_config_to_json(const ExperimentConfig& config);

std::string loss_history_csv(std::span<const double> history);

std::string metric_report_json(const MetricReport& report);

}  // namespace ddk
