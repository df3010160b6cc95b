#include "ddk/dct.hpp"
#include "ddk/noising.hpp"
#include "ddk/trainer.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>

namespace ddk {
namespace {

SyntheticDatasetSpec small_spec(std::size_t count, std::uint64_t seed) {
    SyntheticDatasetSpec s;
    s.count = count;
    s.width = 8;
    s.height = 8;
    s.seed = seed;
    return s;
}

double direct_mse(const MelGrid& a, const MelGrid& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.values()[k] - b.values()[k];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

}  // namespace

TEST(SyntheticData, EmptyCountGivesEmptyDataset) {
    EXPECT_TRUE(make_synthetic_dataset(small_spec(0, 1)).empty());
}

TEST(SyntheticData, RangeAndPriorMean) {
    for (const auto& ex : make_synthetic_dataset(small_spec(10, 2))) {
        EXPECT_GE(ex.x0.values()[0], -1.0);
        double lo = 1.0, hi = -1.0;
        for (double v : ex.x0.values()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        EXPECT_NEAR(lo, -1.0, 1e-12);
        EXPECT_NEAR(hi, 1.0, 1e-12);
        EXPECT_NEAR(ex.u.mean(), ex.x0.mean(), 1e-9);
        EXPECT_LT(max_abs_diff(ex.u, blur(ex.x0, 8.0)), 1e-12);
    }
}

TEST(SyntheticData, SeedDeterminesData) {
    const auto a = make_synthetic_dataset(small_spec(5, 3));
    const auto b = make_synthetic_dataset(small_spec(5, 3));
    const auto c = make_synthetic_dataset(small_spec(5, 4));
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].x0, b[k].x0);
        EXPECT_EQ(a[k].u, b[k].u);
    }
    EXPECT_NE(a[0].x0, c[0].x0);
}

TEST(SyntheticData, ValidatesSpec) {
    auto s = small_spec(1, 0);
    s.harmonics = 0;
    EXPECT_THROW(make_synthetic_dataset(s), ValueError);
    s = small_spec(1, 0);
    s.prior_blur_time = -1.0;
    EXPECT_THROW(make_synthetic_dataset(s), ValueError);
}

TEST(EvaluateLoss, ZeroWeightModelScoresPrior) {
    const auto data = make_synthetic_dataset(small_spec(6, 5));
    double want = 0.0;
    for (const auto& ex : data) want += direct_mse(ex.u, ex.x0);
    want /= static_cast<double>(data.size());
    for (auto kind : {ProcessKind::Rfag, ProcessKind::Mixture}) {
        ProcessConfig p;
        p.kind = kind;
        RandomSource rng(6);
        EXPECT_NEAR(evaluate_loss(ConvRestorerModel(2), data, p, rng), want, 1e-14);
    }
}

TEST(TrainStep, PerfectPriorGivesZeroLossAndNoUpdate) {
    RandomSource rng(7);
    std::vector<TrainingExample> batch;
    for (int k = 0; k < 4; ++k) {
        const MelGrid g = oracle::random_grid(5, 5, rng);
        batch.push_back({g, g});
    }
    ConvRestorerModel model(3);
    const auto before = model;
    AdamOptimizer opt(model.parameter_count(), 1e-3);
    ProcessConfig p;
    EXPECT_EQ(train_step(model, opt, batch, p, rng), 0.0);
    EXPECT_EQ(model, before);
}

// Noisy inputs are drawn once and frozen, so the loss only moves with the weights.
TEST(TrainStep, OverfitsFixedBatch) {
    const auto data = make_synthetic_dataset(small_spec(16, 8));
    ProcessConfig p;
    RandomSource noise_rng(10);
    std::vector<MelGrid> xn;
    for (const auto& ex : data) {
        const int n = static_cast<int>(noise_rng.uniform_int(1, p.steps));
        xn.push_back(noising(p, ex.x0, ex.u, n, draw_noise(p, ex.x0.shape(), noise_rng)));
    }
    RandomSource init(9);
    auto model = ConvRestorerModel::random(init);
    AdamOptimizer opt(model.parameter_count(), TrainConfig{});
    std::vector<double> grad(model.parameter_count());
    auto loss_and_grad = [&] {
        std::fill(grad.begin(), grad.end(), 0.0);
        double total = 0.0;
        for (std::size_t k = 0; k < data.size(); ++k) {
            total += conv_mse_and_gradient(model, xn[k], data[k].u, data[k].x0, grad, 1.0 / 16.0);
        }
        return total / 16.0;
    };
    const double initial = loss_and_grad();
    for (int step = 0; step < 50; ++step) {
        opt.step(model.parameters(), grad);
        loss_and_grad();
    }
    EXPECT_LE(loss_and_grad(), 0.5 * initial);
    EXPECT_EQ(opt.steps_taken(), 50);
}

TEST(TrainLoop, ZeroEpochsLeavesModelUntouched) {
    const auto data = make_synthetic_dataset(small_spec(3, 12));
    RandomSource init(13);
    auto model = ConvRestorerModel::random(init, 2);
    const auto before = model;
    TrainConfig tc;
    tc.epochs = 0;
    EXPECT_TRUE(train_loop(model, data, ProcessConfig{}, tc).loss_history.empty());
    EXPECT_EQ(model, before);
}

TEST(TrainLoop, ReproducibleHistories) {
    const auto data = make_synthetic_dataset(small_spec(20, 14));
    TrainConfig tc;
    tc.epochs = 3;
    tc.batch_size = 6;
    tc.seed = 15;
    RandomSource ia(16), ib(16);
    auto ma = ConvRestorerModel::random(ia, 4);
    auto mb = ConvRestorerModel::random(ib, 4);
    std::vector<int> epochs_seen;
    const auto ha = train_loop(ma, data, ProcessConfig{}, tc, [&](int e, double) { epochs_seen.push_back(e); });
    const auto hb = train_loop(mb, data, ProcessConfig{}, tc);
    EXPECT_EQ(ha.loss_history, hb.loss_history);
    EXPECT_EQ(ma, mb);
    EXPECT_EQ(ha.loss_history.size(), 3u);
    EXPECT_EQ(epochs_seen, (std::vector<int>{1, 2, 3}));
}

TEST(TrainLoop, RejectsBadConfig) {
    ConvRestorerModel model(2);
    const auto data = make_synthetic_dataset(small_spec(2, 0));
    TrainConfig tc;
    tc.batch_size = 0;
    EXPECT_THROW(train_loop(model, data, ProcessConfig{}, tc), ValueError);
    tc = TrainConfig{};
    tc.learning_rate = 0.0;
    EXPECT_THROW(train_loop(model, data, ProcessConfig{}, tc), ValueError);
}

// The step index is drawn uniformly from {1..N}; n = 0 is never used.
TEST(TrainerSampling, StepIndexCoverage) {
    const int steps = 10, draws = 10000;
    RandomSource rng(17);
    std::array<int, 11> counts{};
    for (int k = 0; k < draws; ++k) ++counts[static_cast<std::size_t>(rng.uniform_int(1, steps))];
    EXPECT_EQ(counts[0], 0);
    for (int n = 1; n <= steps; ++n) EXPECT_NEAR(counts[n] / static_cast<double>(draws), 0.1, 0.015);
}

TEST(TrainStep, NonFiniteLossRaisesWithStep) {
    MelGrid x0(3, 3, 1e200);
    MelGrid u(3, 3, 0.0);
    std::vector<TrainingExample> batch{{x0, u}};
    ConvRestorerModel model(2);
    AdamOptimizer opt(model.parameter_count(), 1e-3);
    RandomSource rng(18);
    try {
        train_step(model, opt, batch, ProcessConfig{}, rng);
        FAIL() << "expected TrainingError";
    } catch (const TrainingError& e) {
        EXPECT_GE(e.step(), 1);
        EXPECT_LE(e.step(), 10);
    }
}

TEST(Adam, FirstStepMovesByLearningRate) {
    AdamOptimizer opt(2, 0.1);
    std::vector<double> p{1.0, -1.0};
    const std::vector<double> g{3.0, -0.5};
    opt.step(p, g);
    EXPECT_NEAR(p[0], 0.9, 1e-8);
    EXPECT_NEAR(p[1], -0.9, 1e-8);
    EXPECT_THROW(opt.step(std::span<double>(p.data(), 1), g), ShapeError);
}

}  // namespace ddk
