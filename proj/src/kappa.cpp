#include "jcipa/kappa.hpp"

#include "jcipa/error.hpp"
#include "jcipa/synth.hpp"

#include <cmath>

namespace jcipa {

double s_n(int n, double t, const PhysicalParams& params) {
    const double w = omega(params, n);
    const double gen = std::hypot(params.detuning, w);
    const double s = std::sin(0.5 * gen * t);
    return (w / gen) * (w / gen) * s * s;
}

double expected_sz(double t, const PhysicalParams& params, double tail_tol) {
    const std::vector<double> weights = truncated_weights(Poisson{params.mean_n}, tail_tol);
    double undeformed = 0.0;
    double correction = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const int n = static_cast<int>(k);
        const double sn = s_n(n, t, params);
        undeformed += weights[k] * sn;
        // <n>^(n+1) e^-<n> / n! == <n> P_n
        correction += params.mean_n * weights[k] * (sn - s_n(n + 2, t, params));
    }
    return 0.5 - undeformed + params.epsilon * correction;
}

DeformedScenario deformed_scenario(const PhysicalParams& params, const TimeGrid& grid,
                                   double tail_tol, double eta, const PropagationOptions& options) {
    if (params.detuning != 0.0) {
        throw DomainError("deformed scenario is defined at resonance only (detuning must be 0)");
    }
    PhysicalParams flat = params;
    flat.epsilon = 0.0;

    const InversionTarget deformed_target(target::DeformedCoherentSeries{}, params, tail_tol);
    const InversionTarget undeformed_target(target::CoherentSeries{}, flat, tail_tol);

    DeformedScenario out{
        run_single_sector(deformed_target, 0, grid, eta, options.integrator),
        run_single_sector(undeformed_target, 0, grid, eta, options.integrator),
        run_sector_pipeline(
            [&](int n) {
                return InversionTarget(target::DeformedSectorSummand{n}, params, tail_tol);
            },
            [&](int n) {
                return CouplingProfile(coupling::DeformedGipaClosedForm{n}, params, eta);
            },
            Poisson{params.mean_n}, grid, tail_tol, options),
        {},
        {}};
    out.delta_w = delta_w(out.deformed.reproduced_w, out.undeformed.reproduced_w);
    out.delta_lambda = delta_w(out.deformed.coupling_values, out.undeformed.coupling_values);
    return out;
}

}  // namespace jcipa
