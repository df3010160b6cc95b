#include "ddk/cli.hpp"
#include "ddk/conv_restorer.hpp"
#include "ddk/dct.hpp"
#include "ddk/io.hpp"
#include "ddk/metrics.hpp"
#include "ddk/noising.hpp"
#include "ddk/sampler.hpp"
#include "ddk/trainer.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace ddk;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

MelGrid to_grid(const Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array of shape (W, H)");
    const auto w = static_cast<std::size_t>(a.shape(0));
    const auto h = static_cast<std::size_t>(a.shape(1));
    return MelGrid(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const MelGrid& g) {
    Array out({g.width(), g.height()});
    std::copy(g.values().begin(), g.values().end(), out.mutable_data());
    return out;
}

SamplerConfig sampler_config(const ProcessConfig& process, const std::optional<std::string>& algorithm,
                             const std::string& noise_mode) {
    SamplerConfig s = SamplerConfig::defaults_for(process.kind);
    if (algorithm) s.algorithm = parse_sampler_algorithm(*algorithm);
    s.noise_mode = parse_noise_mode(noise_mode);
    return s;
}

std::vector<TrainingExample> to_examples(const std::vector<Array>& x0s, const std::vector<Array>& us) {
    if (x0s.size() != us.size()) throw py::value_error("x0s and us must have the same length");
    std::vector<TrainingExample> out;
    for (std::size_t k = 0; k < x0s.size(); ++k) out.push_back({to_grid(x0s[k]), to_grid(us[k])});
    return out;
}

}  // namespace

PYBIND11_MODULE(_ddk, m) {
    m.doc() = "Discrete-time diffusion-like generative toolkit";

    // Translators are tried newest first, so the base class goes in first.
    py::register_exception<Error>(m, "DdkError", PyExc_RuntimeError);
    py::register_exception<ValueError>(m, "DdkValueError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);

    py::class_<ProcessConfig>(m, "ProcessConfig")
        .def(py::init([](const std::string& kind, int steps, double sigma, double beta0, double beta1,
                         double mixture_scale) {
                 ProcessConfig c;
                 c.kind = parse_process_kind(kind);
                 c.steps = steps;
                 c.sigma = sigma;
                 c.beta0 = beta0;
                 c.beta1 = beta1;
                 c.mixture_scale = mixture_scale;
                 c.validate();
                 return c;
             }),
             py::arg("kind") = "Rfag", py::arg("steps") = 10, py::arg("sigma") = 0.6, py::arg("beta0") = 0.05,
             py::arg("beta1") = 20.0, py::arg("mixture_scale") = 0.5)
        .def_property_readonly("kind", [](const ProcessConfig& c) { return std::string(to_string(c.kind)); })
        .def_readonly("steps", &ProcessConfig::steps)
        .def_readonly("sigma", &ProcessConfig::sigma)
        .def_readonly("beta0", &ProcessConfig::beta0)
        .def_readonly("beta1", &ProcessConfig::beta1)
        .def_readonly("mixture_scale", &ProcessConfig::mixture_scale);

    m.def("dct2", [](const Array& x) { return to_array(dct2_forward(to_grid(x)).coefficients); });
    m.def("idct2", [](const Array& s) { return to_array(dct2_inverse(FrequencySpectrum{to_grid(s)})); });
    m.def("heat_eigenvalues", [](std::size_t w, std::size_t h) { return to_array(heat_eigenvalues(w, h).lambda); });
    m.def("blur", [](const Array& x, double time) { return to_array(blur(to_grid(x), time)); }, py::arg("x"),
          py::arg("time"));

    m.def(
        "noising",
        [](const Array& x0, const Array& u, int n, const ProcessConfig& process, std::uint64_t seed) {
            const MelGrid g0 = to_grid(x0);
            RandomSource rng(seed);
            return to_array(noising(process, g0, to_grid(u), n, draw_noise(process, g0.shape(), rng)));
        },
        py::arg("x0"), py::arg("u"), py::arg("n"), py::arg("process"), py::arg("seed") = 0);
    m.def(
        "corrupt",
        [](const Array& u, const ProcessConfig& process, std::uint64_t seed) {
            RandomSource rng(seed);
            return to_array(corrupt(process, to_grid(u), rng).first);
        },
        py::arg("u"), py::arg("process"), py::arg("seed") = 0);

    py::class_<ConvRestorerModel>(m, "ConvRestorer")
        .def(py::init<int>(), py::arg("hidden") = 32)
        .def_static(
            "random",
            [](std::uint64_t seed, int hidden) {
                RandomSource rng(seed);
                return ConvRestorerModel::random(rng, hidden);
            },
            py::arg("seed"), py::arg("hidden") = 32)
        .def_static("load", [](const std::filesystem::path& p) { return load_model(p); })
        .def("save", [](const ConvRestorerModel& model, const std::filesystem::path& p) { save_model(model, p); })
        .def_property_readonly("parameter_count", &ConvRestorerModel::parameter_count)
        .def_property_readonly("hidden", &ConvRestorerModel::hidden_channels)
        .def("predict",
             [](const ConvRestorerModel& model, const Array& xn, const Array& u) {
                 return to_array(model.predict(to_grid(xn), to_grid(u)));
             });

    m.def(
        "sample",
        [](const ConvRestorerModel& model, const Array& u, const ProcessConfig& process, std::uint64_t seed,
           const std::optional<std::string>& algorithm, const std::string& noise_mode) {
            RandomSource rng(seed);
            return to_array(sample(process, model, to_grid(u), rng, sampler_config(process, algorithm, noise_mode)).x0_hat);
        },
        py::arg("model"), py::arg("u"), py::arg("process"), py::arg("seed") = 0, py::arg("algorithm") = py::none(),
        py::arg("noise_mode") = "TrajectoryFixed");
    m.def(
        "sample_oracle",
        [](const Array& x0, const Array& u, const ProcessConfig& process, std::uint64_t seed,
           const std::optional<std::string>& algorithm) {
            RandomSource rng(seed);
            return to_array(sample(process, oracle_predict(to_grid(x0)), to_grid(u), rng,
                                   sampler_config(process, algorithm, "TrajectoryFixed"))
                                .x0_hat);
        },
        py::arg("x0"), py::arg("u"), py::arg("process"), py::arg("seed") = 0, py::arg("algorithm") = py::none());

    m.def(
        "make_synthetic_dataset",
        [](std::size_t count, std::size_t width, std::size_t height, std::uint64_t seed) {
            SyntheticDatasetSpec spec;
            spec.count = count;
            spec.width = width;
            spec.height = height;
            spec.seed = seed;
            std::vector<std::pair<Array, Array>> out;
            for (const auto& ex : make_synthetic_dataset(spec)) out.emplace_back(to_array(ex.x0), to_array(ex.u));
            return out;
        },
        py::arg("count") = 200, py::arg("width") = 32, py::arg("height") = 32, py::arg("seed") = 0,
        "List of (x0, u) pairs.");

    m.def(
        "train",
        [](ConvRestorerModel& model, const std::vector<Array>& x0s, const std::vector<Array>& us,
           const ProcessConfig& process, int epochs, std::size_t batch_size, double learning_rate,
           std::uint64_t seed) {
            const auto data = to_examples(x0s, us);
            TrainConfig tc;
            tc.epochs = epochs;
            tc.batch_size = batch_size;
            tc.learning_rate = learning_rate;
            tc.seed = seed;
            py::gil_scoped_release release;
            return train_loop(model, data, process, tc).loss_history;
        },
        py::arg("model"), py::arg("x0s"), py::arg("us"), py::arg("process"), py::arg("epochs") = 300,
        py::arg("batch_size") = 16, py::arg("learning_rate") = 1e-3, py::arg("seed") = 0,
        "Trains in place and returns the per-epoch loss history.");

    m.def("rmse", [](const Array& a, const Array& b) { return rmse(to_grid(a), to_grid(b)); });
    m.def("hf_energy", [](const Array& x, int cutoff) { return hf_energy(to_grid(x), cutoff); });

    m.def("read_grid", [](const std::filesystem::path& p) { return to_array(read_grid(p)); });
    m.def("write_grid", [](const Array& x, const std::filesystem::path& p) { write_grid(to_grid(x), p); });

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli_main(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Runs one ddk command; returns (exit_code, stdout, stderr).");
}
