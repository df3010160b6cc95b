#include "ddk/restorer.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace ddk {

MelGrid OracleRestorer::predict(const MelGrid& xn, const MelGrid& u) const {
    require_same_shape(xn, x0_, "OracleRestorer::predict");
    require_same_shape(u, x0_, "OracleRestorer::predict");
    return x0_;
}

OracleRestorer oracle_predict(MelGrid x0_true) { return OracleRestorer(std::move(x0_true)); }

MelGrid FunctionRestorer::predict(const MelGrid& xn, const MelGrid& u) const {
    return fn_(xn, u);
}

MelGrid LinearRidgeModel::predict(const MelGrid& xn, const MelGrid& u) const {
    require_same_shape(xn, u, "LinearRidgeModel::predict");
    MelGrid out = xn;
    auto o = out.values();
    auto uv = u.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = a * o[k] + b * uv[k] + c;
    return out;
}

LinearRidgeModel ridge_fit(std::span<const RidgeSample> dataset, double regularizer) {
    if (dataset.size() < 3) throw ValueError("ridge_fit: need at least 3 triples");
    if (!(regularizer >= 0.0) || !std::isfinite(regularizer)) {
        throw ValueError("ridge_fit: regularizer must be finite and >= 0");
    }
    Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (const auto& s : dataset) {
        require_same_shape(s.xn, s.u, "ridge_fit");
        require_same_shape(s.xn, s.x0, "ridge_fit");
        auto xn = s.xn.values();
        auto u = s.u.values();
        auto x0 = s.x0.values();
        for (std::size_t k = 0; k < xn.size(); ++k) {
            const Eigen::Vector3d f(xn[k], u[k], 1.0);
            gram.noalias() += f * f.transpose();
            rhs.noalias() += f * x0[k];
        }
    }
    gram.diagonal().array() += regularizer;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(gram);
    // Relative threshold so exactly collinear features count as singular.
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        throw ValueError("ridge_fit: normal equations are singular; use regularizer > 0");
    }
    const Eigen::Vector3d coef = lu.solve(rhs);
    if (!coef.allFinite()) throw ValueError("ridge_fit: non-finite solution");
    return {coef[0], coef[1], coef[2]};
}

}  // namespace ddk
