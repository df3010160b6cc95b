#include "ddk/cli.hpp"

#include "ddk/conv_restorer.hpp"
#include "ddk/io.hpp"
#include "ddk/metrics.hpp"
#include "ddk/noising.hpp"
#include "ddk/sampler.hpp"
#include "ddk/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace ddk {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw ValueError("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw ValueError("failed writing '" + path.string() + "'");
}

std::string sample_name(const char* prefix, std::size_t index) {
    std::ostringstream os;
    os << prefix << '_' << std::setw(4) << std::setfill('0') << index << ".ddk";
    return os.str();
}

// Pairs x0_<id>.ddk / u_<id>.ddk found in a directory, sorted by id.
std::vector<TrainingExample> read_dataset_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ValueError("data directory '" + dir.string() + "' not found");
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("x0_", 0) == 0 && entry.path().extension() == ".ddk") {
            ids.push_back(name.substr(3, name.size() - 3 - 4));
        }
    }
    std::sort(ids.begin(), ids.end());
    std::vector<TrainingExample> data;
    for (const auto& id : ids) {
        MelGrid x0 = read_grid(dir / ("x0_" + id + ".ddk"));
        MelGrid u = read_grid(dir / ("u_" + id + ".ddk"));
        require_same_shape(x0, u, ("dataset item " + id).c_str());
        data.push_back({std::move(x0), std::move(u)});
    }
    if (data.empty()) throw ValueError("no x0_*.ddk files in '" + dir.string() + "'");
    return data;
}

struct Options {
    std::string config;
    std::string out;
    std::string x0;
    std::string prior;
    std::string model;
    std::string data;
    std::string ref;
    std::string hyp;
    std::string report;
    std::string in;
    std::string loss_csv;
    int n = 0;
    std::uint64_t seed = 0;
};

int run_synth_data(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = load_experiment_config(o.config);
    fs::create_directories(o.out);
    const auto data = make_synthetic_dataset(cfg.data);
    for (std::size_t k = 0; k < data.size(); ++k) {
        write_grid(data[k].x0, fs::path(o.out) / sample_name("x0", k));
        write_grid(data[k].u, fs::path(o.out) / sample_name("u", k));
    }
    out << "wrote " << data.size() << " samples to " << o.out << '\n';
    return kExitOk;
}

int run_noise(const Options& o) {
    const ExperimentConfig cfg = load_experiment_config(o.config);
    const MelGrid x0 = read_grid(o.x0);
    const MelGrid u = read_grid(o.prior);
    RandomSource rng(o.seed);
    const NoiseDraw draw = draw_noise(cfg.process, x0.shape(), rng);
    write_grid(noising(cfg.process, x0, u, o.n, draw), o.out);
    return kExitOk;
}

int run_corrupt(const Options& o) {
    const ExperimentConfig cfg = load_experiment_config(o.config);
    const MelGrid u = read_grid(o.prior);
    RandomSource rng(o.seed);
    write_grid(corrupt(cfg.process, u, rng).first, o.out);
    return kExitOk;
}

int run_train(const Options& o, std::ostream& out) {
    ExperimentConfig cfg = load_experiment_config(o.config);
    const auto data = read_dataset_dir(o.data);
    if (cfg.train.checkpoint_every > 0) cfg.train.checkpoint_path = o.out + ".ckpt";
    RandomSource init_rng(cfg.train.seed ^ 0x5DEECE66DULL);
    ConvRestorerModel model = ConvRestorerModel::random(init_rng);
    const TrainResult result = train_loop(model, data, cfg.process, cfg.train, [&](int epoch, double loss) {
        out << "epoch " << epoch << " loss " << loss << '\n';
    });
    save_model(model, o.out);
    write_text(o.loss_csv.empty() ? o.out + ".loss.csv" : o.loss_csv, loss_history_csv(result.loss_history));
    return kExitOk;
}

int run_sample(const Options& o) {
    const ExperimentConfig cfg = load_experiment_config(o.config);
    const ConvRestorerModel model = load_model(o.model);
    const MelGrid u = read_grid(o.prior);
    RandomSource rng(o.seed);
    write_grid(sample(cfg.process, model, u, rng, cfg.sampler_config()).x0_hat, o.out);
    return kExitOk;
}

int run_eval(const Options& o, std::ostream& out) {
    const auto refs = read_dataset_dir(o.ref);
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(o.ref)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("x0_", 0) == 0 && entry.path().extension() == ".ddk") ids.push_back(name);
    }
    std::sort(ids.begin(), ids.end());
    nlohmann::json items = nlohmann::json::array();
    double sum_rmse = 0.0, sum_prior = 0.0;
    std::size_t evaluated = 0;
    for (std::size_t k = 0; k < refs.size(); ++k) {
        const fs::path hyp_path = fs::path(o.hyp) / ids[k];
        if (!fs::exists(hyp_path)) continue;
        const MetricReport r = evaluate(read_grid(hyp_path), refs[k].x0, refs[k].u);
        nlohmann::json item = nlohmann::json::parse(metric_report_json(r));
        item["file"] = ids[k];
        items.push_back(std::move(item));
        sum_rmse += r.rmse;
        sum_prior += r.prior_rmse;
        ++evaluated;
    }
    if (evaluated == 0) throw ValueError("eval: no hypothesis files in '" + o.hyp + "' match the reference set");
    const double mean_rmse = sum_rmse / static_cast<double>(evaluated);
    const double mean_prior = sum_prior / static_cast<double>(evaluated);
    nlohmann::json report = {
        {"count", evaluated},
        {"mean_rmse", mean_rmse},
        {"mean_prior_rmse", mean_prior},
        {"improvement_ratio", mean_prior > 0.0 ? mean_rmse / mean_prior : 0.0},
        {"items", items},
    };
    write_text(o.report, report.dump(2) + "\n");
    out << "evaluated " << evaluated << " pairs, improvement_ratio "
        << report["improvement_ratio"].get<double>() << '\n';
    return kExitOk;
}

int run_render(const Options& o) {
    const auto pgm = render_heatmap(read_grid(o.in));
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f) throw ValueError("cannot open '" + o.out + "' for writing");
    f.write(reinterpret_cast<const char*>(pgm.data()), static_cast<std::streamsize>(pgm.size()));
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-time diffusion-like generative toolkit", "ddk"};
    app.require_subcommand(1);
    Options o;

    auto* synth = app.add_subcommand("synth-data", "Generate a synthetic mel-like dataset");
    synth->add_option("--config", o.config, "Experiment config (JSON)")->required();
    synth->add_option("--out", o.out, "Output directory")->required();

    auto* noise = app.add_subcommand("noise", "Apply the forward process at step n");
    noise->add_option("--config", o.config)->required();
    noise->add_option("--x0", o.x0, "Clean grid file")->required();
    noise->add_option("--prior", o.prior, "Prior grid file")->required();
    noise->add_option("--n", o.n, "Step index in [0, N]")->required();
    noise->add_option("--out", o.out)->required();
    noise->add_option("--seed", o.seed)->required();

    auto* corr = app.add_subcommand("corrupt", "Build the fully corrupted initial sample");
    corr->add_option("--config", o.config)->required();
    corr->add_option("--prior", o.prior)->required();
    corr->add_option("--out", o.out)->required();
    corr->add_option("--seed", o.seed)->required();

    auto* train = app.add_subcommand("train", "Train the convolutional restorer");
    train->add_option("--config", o.config)->required();
    train->add_option("--data", o.data, "Directory written by synth-data")->required();
    train->add_option("--out", o.out, "Model file")->required();
    train->add_option("--loss-csv", o.loss_csv, "Loss history CSV (default <out>.loss.csv)");

    auto* samp = app.add_subcommand("sample", "Run the iterative sampler from a prior");
    samp->add_option("--config", o.config)->required();
    samp->add_option("--model", o.model)->required();
    samp->add_option("--prior", o.prior)->required();
    samp->add_option("--out", o.out)->required();
    samp->add_option("--seed", o.seed)->required();

    auto* ev = app.add_subcommand("eval", "Score hypotheses against references");
    ev->add_option("--ref", o.ref, "Directory with x0_*.ddk and u_*.ddk")->required();
    ev->add_option("--hyp", o.hyp, "Directory with x0_*.ddk hypotheses")->required();
    ev->add_option("--report", o.report, "JSON report path")->required();

    auto* render = app.add_subcommand("render", "Render a grid file as a PGM heatmap");
    render->add_option("--in", o.in)->required();
    render->add_option("--out", o.out)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "ddk: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (synth->parsed()) return run_synth_data(o, out);
        if (noise->parsed()) return run_noise(o);
        if (corr->parsed()) return run_corrupt(o);
        if (train->parsed()) return run_train(o, out);
        if (samp->parsed()) return run_sample(o);
        if (ev->parsed()) return run_eval(o, out);
        if (render->parsed()) return run_render(o);
    } catch (const Error& e) {
        err << "ddk: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "ddk: " << e.what() << '\n';
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        err << "ddk: " << e.what() << '\n';
        return kExitData;
    }
    err << "ddk: no subcommand\n";
    return kExitUsage;
}

}  // namespace ddk
