#pragma once

#include "ddk/grid.hpp"
#include "ddk/process.hpp"
#include "ddk/random.hpp"

#include <utility>

namespace ddk {

/// Closed-form forward process: X_n from (x0, u, n) without simulation.
///
/// n = 0 returns x0 exactly for every kind (X_0 is the clean data). For
/// Rfag, Rfmg, Blurring and Mixture, n = N returns the corruption endpoint
/// exactly, without any dependence on x0. Throws ShapeError when x0, u and
/// the tensors in draw disagree, ValueError when n is out of range or draw
/// lacks a tensor the kind needs.
MelGrid noising(const ProcessConfig& config, const MelGrid& x0, const MelGrid& u, int n,
                const NoiseDraw& draw);

// Per-process formulas. Each assumes validated shapes; noising() is the
// checked entry point.

/// (1 - e^{-rho/2}) u + e^{-rho/2} x0 + sqrt(1 - e^{-rho}) z
MelGrid grad_tts_dt(const MelGrid& x0, const MelGrid& u, StepIndex n,
                    const BetaSchedule& schedule, const MelGrid& z_signal);

/// (1 - n/N) x0 + (n/N) (sigma eps1 + u)
MelGrid rfag(const MelGrid& x0, const MelGrid& u, StepIndex n, double sigma,
             const MelGrid& eps1);

/// (1 - n/N) x0 + (n/N) ((1 + sigma eps2) * u)
MelGrid rfmg(const MelGrid& x0, const MelGrid& u, StepIndex n, double sigma,
             const MelGrid& eps2);

/// (1 - n/N) blur(x0, n) + (n/N) u
MelGrid blurring_path(const MelGrid& x0, const MelGrid& u, StepIndex n);

/// Gaussian around blur(x0, n) in the frequency domain with per-coefficient
/// standard deviation sqrt(scale * (-lambda(i, j))). The noise level does not
/// depend on n, so this is noisy even at n = 0.
MelGrid mixture_noise(const MelGrid& x0, double n, double scale, const MelGrid& z_freq);

/// (1 - n/N) mixture_noise(x0, n) + (n/N) u for n >= 1; x0 at n = 0.
MelGrid mixture_path(const MelGrid& x0, const MelGrid& u, StepIndex n, double scale,
                     const MelGrid& z_freq);

/// Fully corrupted initial sample X_N built from the prior alone, together
/// with the trajectory's noise draw. For GradTtsDt the e^{-rho(N)/2} x0 term
/// is dropped since x0 is unknown at inference.
std::pair<MelGrid, NoiseDraw> corrupt(const ProcessConfig& config, const MelGrid& u,
                                      RandomSource& rng);

}  // namespace ddk
