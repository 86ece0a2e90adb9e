#pragma once

#include "jcipa/core.hpp"
#include "jcipa/dynamics.hpp"

#include <vector>

namespace jcipa {

/// Detuned sector transition function
/// S_n(t) = Omega_n^2 / (Delta^2 + Omega_n^2) sin^2(sqrt(Delta^2 + Omega_n^2) t / 2).
double s_n(int n, double t, const PhysicalParams& params);

/// Deformed spin expectation for an initially excited atom and coherent field:
/// 1/2 - sum P_n S_n + eps sum <n> P_n (S_n - S_{n+2}).
double expected_sz(double t, const PhysicalParams& params, double tail_tol = kDefaultTailTol);

/// Deformed vs undeformed synthesis at resonance.
struct DeformedScenario {
    /// Vacuum IPA reproducing the deformed coherent series.
    ScenarioResult deformed;
    /// Vacuum IPA reproducing the undeformed coherent series.
    ScenarioResult undeformed;
    /// Closed-form deformed couplings applied per sector to a coherent field.
    ScenarioResult coherent_gipa;
    /// Reproduced deformed minus undeformed inversion.
    std::vector<double> delta_w;
    /// Deformed minus undeformed vacuum coupling.
    std::vector<double> delta_lambda;
};

DeformedScenario deformed_scenario(const PhysicalParams& params, const TimeGrid& grid,
                                   double tail_tol = kDefaultTailTol, double eta = kDefaultEta,
                                   const PropagationOptions& options = {});

}  // namespace jcipa
