#pragma once

#include "jcipa/core.hpp"
#include "jcipa/integrator.hpp"
#include "jcipa/inversion.hpp"
#include "jcipa/synth.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace jcipa {

/// Amplitudes of |e,n> and |g,n+1> at one instant.
struct SectorState {
    int n = 0;
    std::complex<double> c_e{1.0, 0.0};
    std::complex<double> c_g{0.0, 0.0};

    double norm() const { return std::norm(c_e) + std::norm(c_g); }
    double inversion() const { return std::norm(c_e) - std::norm(c_g); }
};

struct SectorTrajectory {
    int n = 0;
    TimeGrid grid;
    std::vector<SectorState> states;
    std::vector<double> inversion;
    IntegratorStats stats;

    /// max_i | |c_e|^2 + |c_g|^2 - 1 |
    double max_norm_drift() const;
};

/// One tabulated synthesis/verification run.
struct ScenarioResult {
    TimeGrid grid;
    std::vector<double> target_w;
    /// Coupling of the representative sector (see coupling_sector).
    std::vector<double> coupling_values;
    std::vector<double> reproduced_w;
    std::vector<double> residuals;
    std::vector<std::size_t> regularized_points;
    int coupling_sector = 0;
    std::size_t sector_count = 1;
    double max_norm_drift = 0.0;

    /// max |residual| outside (inside) the regularized windows.
    double max_residual_outside(std::size_t half_width = kRegularizedWindow) const;
    double max_residual_inside(std::size_t half_width = kRegularizedWindow) const;
};

struct PropagationOptions {
    IntegratorOptions integrator{};
    /// Worker threads for sector-parallel runs; 0 uses the hardware count.
    unsigned threads = 0;
};

/// Integrates i dC_e/dt = lambda sqrt(n+1) C_g, i dC_g/dt = lambda sqrt(n+1) C_e
/// from |e,n> and samples the dense output on the grid. No renormalization.
SectorTrajectory propagate_sector(const CouplingProfile& coupling, int n, const TimeGrid& grid,
                                  const IntegratorOptions& options = {});

/// Independent check for real couplings: W_n(t) = cos(2 sqrt(n+1) int_0^t lambda),
/// with the phase integral accumulated by adaptive Gauss-Kronrod quadrature.
std::vector<double> phase_integral_oracle(const CouplingProfile& coupling, int n,
                                          const TimeGrid& grid);

using SectorTargetFamily = std::function<InversionTarget(int n)>;
using SectorCouplingFamily = std::function<CouplingProfile(int n)>;

/// Sector loop with caller-supplied couplings: propagate each kept sector,
/// weight its inversion, and compare with the weighted targets.
ScenarioResult run_sector_pipeline(const SectorTargetFamily& targets,
                                   const SectorCouplingFamily& couplings,
                                   const PhotonStatistics& stats, const TimeGrid& grid,
                                   double tail_tol = kDefaultTailTol,
                                   const PropagationOptions& options = {});

/// Generalized IPA pipeline: Lambda_n = gipa(target_n, n), propagate, then
/// sum the sector inversions with the photon-number weights.
ScenarioResult run_gipa_pipeline(const SectorTargetFamily& targets, const PhotonStatistics& stats,
                                 const PhysicalParams& params, const TimeGrid& grid,
                                 double tail_tol = kDefaultTailTol, double eta = kDefaultEta,
                                 const PropagationOptions& options = {});

/// Single-sector synthesis and verification from |e,n> (vacuum IPA at n = 0).
ScenarioResult run_single_sector(const InversionTarget& target, int n, const TimeGrid& grid,
                                 double eta = kDefaultEta,
                                 const IntegratorOptions& options = {});

/// Pointwise a - b; throws DomainError on length mismatch.
std::vector<double> delta_w(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace jcipa
