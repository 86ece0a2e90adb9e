#pragma once

#include "jcipa/core.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace jcipa {

namespace target {

/// cos(Omega_n t): constant coupling lambda0 in sector n.
struct ConstantCoupling {
    int n = 0;
};
/// cos((4/3) lambda0 sqrt(zeta t^3)): response to lambda0 sqrt(zeta t) from |e,0>.
struct SqrtTime {};
/// cos^2(Omega_n t / 2): the atom never favours the ground state.
struct CosSquared {
    int n = 0;
};
/// Sum_n P_n cos(Omega_n t) over Poisson(mean_n).
struct CoherentSeries {};
/// Sum_n P_n {cos(Omega_n t) + eps <n> [cos(Omega_{n+2} t) - cos(Omega_n t)]}.
struct DeformedCoherentSeries {};
/// One bracketed term of the deformed coherent series.
struct DeformedSectorSummand {
    int n = 0;
};
/// Sum_n P_n cos^2(Omega_n t / 2) over Bose-Einstein(mean_n).
struct ThermalCosSquaredSeries {};
/// Tabulated W on a grid; linear interpolation, finite-difference derivatives.
struct Sampled {
    TimeGrid grid;
    std::vector<double> values;
};

}  // namespace target

using TargetKind = std::variant<target::ConstantCoupling, target::SqrtTime, target::CosSquared,
                                target::CoherentSeries, target::DeformedCoherentSeries,
                                target::DeformedSectorSummand, target::ThermalCosSquaredSeries,
                                target::Sampled>;

/// Value, first two derivatives, and the complements 1 - W and 1 + W at one
/// instant. The complements are summed term by term from half-angle sines and
/// cosines, so they keep full relative accuracy where |W| -> 1.
struct InversionJet {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
    double one_minus = 0.0;
    double one_plus = 0.0;
};

/// A prescribed population inversion W(t).
class InversionTarget {
public:
    InversionTarget(TargetKind kind, PhysicalParams params, double tail_tol = kDefaultTailTol);

    double eval(double t) const { return jet(t).value; }
    double derivative(double t) const { return jet(t).first; }
    double second_derivative(double t) const { return jet(t).second; }
    InversionJet jet(double t) const;

    std::vector<double> sample(const TimeGrid& grid) const;

    /// False only for Sampled targets.
    bool analytic() const noexcept;
    const TargetKind& kind() const noexcept { return kind_; }
    const PhysicalParams& params() const noexcept { return params_; }
    double tail_tol() const noexcept { return tail_tol_; }
    /// Series weights (renormalized over kept sectors); empty for single-sector kinds.
    std::span<const double> weights() const noexcept { return weights_; }
    std::string name() const;

private:
    InversionJet sampled_jet(const target::Sampled& s, double t) const;

    TargetKind kind_;
    PhysicalParams params_;
    double tail_tol_;
    std::vector<double> weights_;
    // Sampled only: nodal finite-difference derivatives.
    std::vector<double> nodal_first_;
    std::vector<double> nodal_second_;
};

}  // namespace jcipa
