#pragma once

#include "ddk/grid.hpp"

#include <functional>
#include <span>
#include <tuple>
#include <vector>

namespace ddk {

/// Clean-data predictor (xn, u) -> x0_hat. Deliberately receives no step index.
class Restorer {
public:
    virtual ~Restorer() = default;
    virtual MelGrid predict(const MelGrid& xn, const MelGrid& u) const = 0;
};

/// Ignores its inputs and returns the true clean data. Used to verify samplers.
class OracleRestorer final : public Restorer {
public:
    explicit OracleRestorer(MelGrid x0_true) : x0_(std::move(x0_true)) {}
    MelGrid predict(const MelGrid& xn, const MelGrid& u) const override;

private:
    MelGrid x0_;
};

OracleRestorer oracle_predict(MelGrid x0_true);

/// Wraps an arbitrary callable.
class FunctionRestorer final : public Restorer {
public:
    using Fn = std::function<MelGrid(const MelGrid&, const MelGrid&)>;
    explicit FunctionRestorer(Fn fn) : fn_(std::move(fn)) {}
    MelGrid predict(const MelGrid& xn, const MelGrid& u) const override;

private:
    Fn fn_;
};

/// x0_hat = a * xn + b * u + c, elementwise.
struct LinearRidgeModel final : Restorer {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    LinearRidgeModel() = default;
    LinearRidgeModel(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {}

    MelGrid predict(const MelGrid& xn, const MelGrid& u) const override;
};

struct RidgeSample {
    MelGrid xn;
    MelGrid u;
    MelGrid x0;
};

/// Minimises sum |a xn + b u + c - x0|^2 + reg (a^2 + b^2 + c^2) over all
/// entries of all triples via the 3 x 3 normal equations. Needs at least three
/// triples. Throws ValueError when the system is singular (advise reg > 0).
LinearRidgeModel ridge_fit(std::span<const RidgeSample> dataset, double regularizer = 1e-6);

}  // namespace ddk
