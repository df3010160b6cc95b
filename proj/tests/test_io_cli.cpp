#include "ddk/cli.hpp"
#include "ddk/conv_restorer.hpp"
#include "ddk/io.hpp"
#include "ddk/noising.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ddk {
namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = fs::temp_directory_path() / ("ddk_test_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string& name) const { return path_ / name; }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::vector<std::uint8_t> slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void dump(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

int run(const std::vector<std::string>& args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST(GridFile, RoundTripIsExactForFloat32Values) {
    MelGrid g(3, 2, std::vector<double>{0.5, -1.25, 3.0, 0.0, 1e-3f, -7.75});
    const auto bytes = encode_grid(g);
    ASSERT_EQ(bytes.size(), kGridHeaderBytes + 6 * 4);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "DDK1");
    EXPECT_EQ(bytes[4], 3);
    EXPECT_EQ(bytes[8], 2);
    EXPECT_EQ(decode_grid(bytes), g);
}

TEST(GridFile, RejectsMalformedInput) {
    const auto good = encode_grid(MelGrid(2, 2, 1.0));
    auto bad = good;
    bad[1] = 'X';
    try {
        decode_grid(bad);
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.offset(), 1u);  // first mismatching byte
    }
    auto truncated = good;
    truncated.resize(truncated.size() - 2);
    try {
        decode_grid(truncated);
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_GE(e.offset(), kGridHeaderBytes);
    }
    auto trailing = good;
    trailing.push_back(0);
    EXPECT_THROW(decode_grid(trailing), FormatError);
    auto zero_width = good;
    zero_width[4] = 0;
    EXPECT_THROW(decode_grid(zero_width), FormatError);
    auto reserved = good;
    reserved[12] = 1;
    EXPECT_THROW(decode_grid(reserved), FormatError);
    auto nan = good;
    nan[16] = 0x00; nan[17] = 0x00; nan[18] = 0xC0; nan[19] = 0x7F;
    EXPECT_THROW(decode_grid(nan), FormatError);
}

TEST(Heatmap, HeaderOrientationAndRange) {
    // W = 3 columns, H = 2 rows; bin j = 0 lands on the bottom row.
    MelGrid g(3, 2, std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    const auto pgm = render_heatmap(g);
    const std::string header = "P5\n3 2\n255\n";
    ASSERT_EQ(pgm.size(), header.size() + 6);
    EXPECT_EQ(std::string(pgm.begin(), pgm.begin() + static_cast<long>(header.size())), header);
    const auto* px = pgm.data() + header.size();
    // top row holds j = 1: values 1, 3, 5
    EXPECT_EQ(px[0], 51);
    EXPECT_EQ(px[2], 255);
    EXPECT_EQ(px[3], 0);
    EXPECT_EQ(px[5], 204);

    const auto flat = render_heatmap(MelGrid(2, 2, 0.3));
    for (std::size_t k = flat.size() - 4; k < flat.size(); ++k) EXPECT_EQ(flat[k], 128);
}

TEST(Config, DefaultsAndOverrides) {
    const auto c = parse_experiment_config("{}");
    EXPECT_EQ(c.process.kind, ProcessKind::Rfag);
    EXPECT_EQ(c.process.steps, 10);
    EXPECT_EQ(c.sampler_config().algorithm, SamplerAlgorithm::Alg1);

    const auto b = parse_experiment_config(R"({"process": {"kind": "Blurring", "N": 4}})");
    EXPECT_EQ(b.process.steps, 4);
    EXPECT_EQ(b.sampler_config().algorithm, SamplerAlgorithm::Alg2);

    const auto s = parse_experiment_config(R"({"process": {"kind": "Blurring"}, "sampler": {"algorithm": "Alg1"}})");
    EXPECT_EQ(s.sampler_config().algorithm, SamplerAlgorithm::Alg1);

    const auto round = parse_experiment_config(experiment_config_to_json(b));
    EXPECT_EQ(round.process.kind, ProcessKind::Blurring);
    EXPECT_EQ(round.process.steps, 4);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_experiment_config(R"({"proces": {}})"), ValueError);
    EXPECT_THROW(parse_experiment_config(R"({"process": {"sigmaa": 1}})"), ValueError);
    EXPECT_THROW(parse_experiment_config(R"({"process": {"N": "ten"}})"), ValueError);
    EXPECT_THROW(parse_experiment_config(R"({"process": {"N": 0}})"), ValueError);
    EXPECT_THROW(parse_experiment_config("{not json"), FormatError);
}

TEST(LossCsv, Format) {
    const std::vector<double> h{0.5, 0.25};
    const std::string csv = loss_history_csv(h);
    EXPECT_EQ(csv.rfind("epoch,loss\n1,", 0), 0u) << csv;
    EXPECT_NE(csv.find("\n2,"), std::string::npos);
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run({}), kExitUsage);
    EXPECT_EQ(run({"frobnicate"}), kExitUsage);
    EXPECT_EQ(run({"noise", "--config", "x.json"}), kExitUsage);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}), kExitOk); }

TEST(Cli, BadGridFileExitsTwoWithOffset) {
    TempDir dir("badgrid");
    dump(dir / "c.json", "{}");
    dump(dir / "p.ddk", "DDK2xxxxxxxxxxxx");
    std::string err;
    EXPECT_EQ(run({"corrupt", "--config", (dir / "c.json").string(), "--prior", (dir / "p.ddk").string(),
                   "--out", (dir / "o.ddk").string(), "--seed", "1"},
                  &err),
              kExitData);
    EXPECT_NE(err.find("offset 3"), std::string::npos) << err;
    EXPECT_EQ(run({"render", "--in", (dir / "missing.ddk").string(), "--out", (dir / "o.pgm").string()}),
              kExitData);
}

TEST(Cli, NoiseAtZeroIsBitExact) {
    TempDir dir("noise0");
    RandomSource rng(1);
    const MelGrid x0 = decode_grid(encode_grid(oracle::random_grid(5, 4, rng)));
    const MelGrid u = decode_grid(encode_grid(oracle::random_grid(5, 4, rng)));
    write_grid(x0, dir / "x0.ddk");
    write_grid(u, dir / "u.ddk");
    for (const char* kind : {"GradTtsDt", "Rfag", "Rfmg", "Blurring", "Mixture"}) {
        dump(dir / "c.json", std::string(R"({"process": {"kind": ")") + kind + "\"}}");
        ASSERT_EQ(run({"noise", "--config", (dir / "c.json").string(), "--x0", (dir / "x0.ddk").string(),
                       "--prior", (dir / "u.ddk").string(), "--n", "0", "--out", (dir / "o.ddk").string(),
                       "--seed", "3"}),
                  kExitOk);
        EXPECT_EQ(slurp(dir / "o.ddk"), slurp(dir / "x0.ddk")) << kind;
    }
    EXPECT_EQ(run({"noise", "--config", (dir / "c.json").string(), "--x0", (dir / "x0.ddk").string(),
                   "--prior", (dir / "u.ddk").string(), "--n", "11", "--out", (dir / "o.ddk").string(),
                   "--seed", "3"}),
              kExitData);
}

TEST(Cli, CorruptBlurringReturnsPrior) {
    TempDir dir("corrupt");
    RandomSource rng(2);
    write_grid(oracle::random_grid(4, 4, rng), dir / "u.ddk");
    dump(dir / "c.json", R"({"process": {"kind": "Blurring"}})");
    ASSERT_EQ(run({"corrupt", "--config", (dir / "c.json").string(), "--prior", (dir / "u.ddk").string(),
                   "--out", (dir / "o.ddk").string(), "--seed", "9"}),
              kExitOk);
    EXPECT_EQ(slurp(dir / "o.ddk"), slurp(dir / "u.ddk"));
}

TEST(Cli, SampleTwiceIsBitIdentical) {
    TempDir dir("sample");
    RandomSource rng(3);
    write_grid(oracle::random_grid(6, 6, rng), dir / "u.ddk");
    RandomSource mrng(4);
    save_model(ConvRestorerModel::random(mrng, 4), dir / "m.bin");
    dump(dir / "c.json", R"({"process": {"kind": "Rfmg", "N": 4}, "sampler": {"noise_mode": "FreshPerStep"}})");
    for (const char* out : {"a.ddk", "b.ddk"}) {
        ASSERT_EQ(run({"sample", "--config", (dir / "c.json").string(), "--model", (dir / "m.bin").string(),
                       "--prior", (dir / "u.ddk").string(), "--out", (dir / out).string(), "--seed", "5"}),
                  kExitOk);
    }
    EXPECT_EQ(slurp(dir / "a.ddk"), slurp(dir / "b.ddk"));
}

TEST(Cli, SynthTrainEvalRender) {
    TempDir dir("pipeline");
    dump(dir / "c.json",
         R"({"data": {"count": 3, "W": 6, "H": 5, "seed": 1}, "train": {"epochs": 2, "batch_size": 2}})");
    const std::string cfg = (dir / "c.json").string();
    ASSERT_EQ(run({"synth-data", "--config", cfg, "--out", (dir / "data").string()}), kExitOk);
    EXPECT_TRUE(fs::exists(dir / "data/x0_0002.ddk"));
    EXPECT_TRUE(fs::exists(dir / "data/u_0002.ddk"));
    ASSERT_EQ(run({"train", "--config", cfg, "--data", (dir / "data").string(), "--out", (dir / "m.bin").string()}),
              kExitOk);
    const auto csv = slurp(dir / "m.bin.loss.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

    fs::create_directories(dir / "hyp");
    fs::copy_file(dir / "data/u_0001.ddk", dir / "hyp/x0_0001.ddk");
    ASSERT_EQ(run({"eval", "--ref", (dir / "data").string(), "--hyp", (dir / "hyp").string(), "--report",
                   (dir / "r.json").string()}),
              kExitOk);
    const auto report = slurp(dir / "r.json");
    const std::string text(report.begin(), report.end());
    EXPECT_NE(text.find("\"count\": 1"), std::string::npos) << text;
    EXPECT_NE(text.find("\"improvement_ratio\": 1.0"), std::string::npos) << text;

    ASSERT_EQ(run({"render", "--in", (dir / "data/x0_0000.ddk").string(), "--out", (dir / "x.pgm").string()}),
              kExitOk);
    EXPECT_EQ(slurp(dir / "x.pgm").size(), std::string("P5\n6 5\n255\n").size() + 30);
}

}  // namespace ddk
