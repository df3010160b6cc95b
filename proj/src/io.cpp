#include "ddk/io.hpp"

#include "bytes.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ddk {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ValueError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ValueError("config: unknown key '" + where + "." + key + "'");
    }
}

template <typename T>
void read_number(const json& obj, const std::string& where, const char* key, T& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    const std::string name = where + "." + key;
    if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ValueError("config: '" + name + "' must be a number");
        out = v.get<T>();
    } else {
        if (!v.is_number_integer()) throw ValueError("config: '" + name + "' must be an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_unsigned() || v.get<long long>() >= 0) {
                out = v.get<T>();
            } else {
                throw ValueError("config: '" + name + "' must be nonnegative");
            }
        } else {
            const long long x = v.get<long long>();
            if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) {
                throw ValueError("config: '" + name + "' out of range");
            }
            out = static_cast<T>(x);
        }
    }
}

std::string read_string(const json& obj, const std::string& where, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ValueError("config: '" + where + "." + key + "' must be a string");
    return v.get<std::string>();
}

}  // namespace

std::vector<std::uint8_t> encode_grid(const MelGrid& x) {
    if (x.empty()) throw ValueError("encode_grid: empty grid");
    if (x.width() > UINT32_MAX || x.height() > UINT32_MAX) throw ValueError("encode_grid: grid too large");
    std::vector<std::uint8_t> out{'D', 'D', 'K', '1'};
    out.reserve(kGridHeaderBytes + 4 * x.size());
    bytes::put_u32(out, static_cast<std::uint32_t>(x.width()));
    bytes::put_u32(out, static_cast<std::uint32_t>(x.height()));
    bytes::put_u32(out, 0);
    for (double v : x.values()) {
        const auto f = static_cast<float>(v);
        if (!std::isfinite(f)) throw ValueError("encode_grid: value overflows float32");
        bytes::put_f32(out, f);
    }
    return out;
}

MelGrid decode_grid(std::span<const std::uint8_t> in) {
    if (in.size() < kGridHeaderBytes) {
        throw FormatError("grid file: truncated header, " + std::to_string(in.size()) + " of 16 bytes",
                          in.size());
    }
    const char magic[4] = {'D', 'D', 'K', '1'};
    for (std::size_t k = 0; k < 4; ++k) {
        if (in[k] != static_cast<std::uint8_t>(magic[k])) throw FormatError("grid file: bad magic, expected \"DDK1\"", k);
    }
    const std::uint32_t w = bytes::get_u32(in, 4);
    const std::uint32_t h = bytes::get_u32(in, 8);
    if (w == 0) throw FormatError("grid file: width must be >= 1", 4);
    if (h == 0) throw FormatError("grid file: height must be >= 1", 8);
    if (bytes::get_u32(in, 12) != 0) throw FormatError("grid file: reserved field must be 0", 12);
    const std::uint64_t expected = kGridHeaderBytes + 4ull * w * h;
    if (in.size() < expected) {
        throw FormatError("grid file: truncated payload, expected " + std::to_string(expected) +
                              " bytes, got " + std::to_string(in.size()),
                          in.size());
    }
    if (in.size() > expected) {
        throw FormatError("grid file: " + std::to_string(in.size() - expected) + " trailing bytes",
                          static_cast<std::size_t>(expected));
    }
    std::vector<double> values(static_cast<std::size_t>(w) * h);
    for (std::size_t k = 0; k < values.size(); ++k) {
        const float f = bytes::get_f32(in, kGridHeaderBytes + 4 * k);
        if (!std::isfinite(f)) throw FormatError("grid file: non-finite value", kGridHeaderBytes + 4 * k);
        values[k] = f;
    }
    return MelGrid(w, h, std::move(values));
}

void write_grid(const MelGrid& x, const std::filesystem::path& path) {
    bytes::write_file(path, encode_grid(x));
}

MelGrid read_grid(const std::filesystem::path& path) {
    try {
        return decode_grid(bytes::read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what(), e.offset());
    }
}

std::vector<std::uint8_t> render_heatmap(const MelGrid& x) {
    if (!x.all_finite() || x.empty()) throw ValueError("render_heatmap: grid must be finite and nonempty");
    const std::string header =
        "P5\n" + std::to_string(x.width()) + " " + std::to_string(x.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const auto [lo, hi] = std::minmax_element(x.values().begin(), x.values().end());
    const double vmin = *lo;
    const double span = *hi - vmin;
    for (std::size_t row = 0; row < x.height(); ++row) {
        const std::size_t j = x.height() - 1 - row;
        for (std::size_t i = 0; i < x.width(); ++i) {
            std::uint8_t px = 128;
            if (span > 0.0) px = static_cast<std::uint8_t>(std::lround(255.0 * (x(i, j) - vmin) / span));
            out.push_back(px);
        }
    }
    return out;
}

SamplerConfig ExperimentConfig::sampler_config() const {
    SamplerConfig s = SamplerConfig::defaults_for(process.kind);
    if (algorithm) s.algorithm = *algorithm;
    s.noise_mode = noise_mode;
    return s;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("config: invalid JSON: ") + e.what(), e.byte);
    }
    ExperimentConfig cfg;
    reject_unknown(root, "config", {"process", "sampler", "train", "data"});

    if (root.contains("process")) {
        const json& p = root.at("process");
        reject_unknown(p, "process", {"kind", "N", "sigma", "beta0", "beta1", "mixture_scale"});
        if (p.contains("kind")) cfg.process.kind = parse_process_kind(read_string(p, "process", "kind"));
        read_number(p, "process", "N", cfg.process.steps);
        read_number(p, "process", "sigma", cfg.process.sigma);
        read_number(p, "process", "beta0", cfg.process.beta0);
        read_number(p, "process", "beta1", cfg.process.beta1);
        read_number(p, "process", "mixture_scale", cfg.process.mixture_scale);
    }
    if (root.contains("sampler")) {
        const json& s = root.at("sampler");
        reject_unknown(s, "sampler", {"algorithm", "noise_mode"});
        if (s.contains("algorithm")) {
            cfg.algorithm = parse_sampler_algorithm(read_string(s, "sampler", "algorithm"));
        }
        if (s.contains("noise_mode")) {
            cfg.noise_mode = parse_noise_mode(read_string(s, "sampler", "noise_mode"));
        }
    }
    if (root.contains("train")) {
        const json& t = root.at("train");
        reject_unknown(t, "train", {"epochs", "batch_size", "learning_rate", "seed", "checkpoint_every"});
        read_number(t, "train", "epochs", cfg.train.epochs);
        read_number(t, "train", "batch_size", cfg.train.batch_size);
        read_number(t, "train", "learning_rate", cfg.train.learning_rate);
        read_number(t, "train", "seed", cfg.train.seed);
        read_number(t, "train", "checkpoint_every", cfg.train.checkpoint_every);
    }
    if (root.contains("data")) {
        const json& d = root.at("data");
        reject_unknown(d, "data", {"count", "W", "H", "harmonics", "max_frequency",
                                   "envelope_smoothness", "prior_blur_time", "seed"});
        read_number(d, "data", "count", cfg.data.count);
        read_number(d, "data", "W", cfg.data.width);
        read_number(d, "data", "H", cfg.data.height);
        read_number(d, "data", "harmonics", cfg.data.harmonics);
        read_number(d, "data", "max_frequency", cfg.data.max_frequency);
        read_number(d, "data", "envelope_smoothness", cfg.data.envelope_smoothness);
        read_number(d, "data", "prior_blur_time", cfg.data.prior_blur_time);
        read_number(d, "data", "seed", cfg.data.seed);
    }
    cfg.process.validate();
    cfg.train.validate();
    cfg.data.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ValueError("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_experiment_config(ss.str());
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
    json j;
    j["process"] = {{"kind", std::string(to_string(c.process.kind))},
                    {"N", c.process.steps},
                    {"sigma", c.process.sigma},
                    {"beta0", c.process.beta0},
                    {"beta1", c.process.beta1},
                    {"mixture_scale", c.process.mixture_scale}};
    j["sampler"] = {{"algorithm", std::string(to_string(c.sampler_config().algorithm))},
                    {"noise_mode", std::string(to_string(c.noise_mode))}};
    j["train"] = {{"epochs", c.train.epochs},
                  {"batch_size", c.train.batch_size},
                  {"learning_rate", c.train.learning_rate},
                  {"seed", c.train.seed},
                  {"checkpoint_every", c.train.checkpoint_every}};
    j["data"] = {{"count", c.data.count},
                 {"W", c.data.width},
                 {"H", c.data.height},
                 {"harmonics", c.data.harmonics},
                 {"max_frequency", c.data.max_frequency},
                 {"envelope_smoothness", c.data.envelope_smoothness},
                 {"prior_blur_time", c.data.prior_blur_time},
                 {"seed", c.data.seed}};
    return j.dump(2);
}

std::string loss_history_csv(std::span<const double> history) {
    std::ostringstream os;
    os.precision(17);
    os << "epoch,loss\n";
    for (std::size_t k = 0; k < history.size(); ++k) os << (k + 1) << ',' << history[k] << '\n';
    return os.str();
}

std::string metric_report_json(const MetricReport& r) {
    json j = {{"rmse", r.rmse},
              {"prior_rmse", r.prior_rmse},
              {"improvement_ratio", r.improvement_ratio},
              {"frequency_energy", r.frequency_energy}};
    return j.dump(2);
}

}  // namespace ddk
