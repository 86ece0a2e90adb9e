#pragma once

#include "jcipa/core.hpp"
#include "jcipa/inversion.hpp"

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

namespace jcipa {

/// Threshold on 1 - W^2 (as eta^2) below which the synthesis formula is
/// treated as the removable 0/0 point.
inline constexpr double kDefaultEta = 1e-6;
/// Half-width, in grid steps, of the window around a regularized point
/// excluded from the tight round-trip tolerance.
inline constexpr std::size_t kRegularizedWindow = 3;

/// Radicand of the closed-form deformed coupling. The published expression
/// keeps 1 - W^2 to first order in eps <n>; the exact form adds the
/// -(eps <n>)^2 (cos Omega_{n+2} t - cos Omega_n t)^2 term and is what the
/// generalized synthesis formula produces.
enum class Radicand { exact, first_order };

namespace coupling {

struct Constant {
    double lambda0 = 1.0;
};
/// lambda0 sqrt(zeta t).
struct SqrtTime {
    double lambda0 = 1.0;
    double zeta = 1.0;
};
/// lambda0 sin(Omega_n t) / (2 sqrt(1 - cos^4(Omega_n t / 2))).
struct CosSquaredClosedForm {
    int n = 0;
};
/// Coupling reproducing one bracketed sector term of the deformed series.
struct DeformedGipaClosedForm {
    int n = 0;
    Radicand radicand = Radicand::exact;
};
/// Output of ipa/gipa on a grid.
struct SynthesizedGrid {
    TimeGrid grid;
    std::vector<double> values;
    std::vector<std::size_t> regularized_points;
    int n = 0;
    /// Target the grid was synthesized from. Analytic sources are re-evaluated
    /// pointwise between grid nodes; Sampled sources are interpolated linearly.
    std::shared_ptr<const InversionTarget> source;
};

}  // namespace coupling

using CouplingKind = std::variant<coupling::Constant, coupling::SqrtTime,
                                  coupling::CosSquaredClosedForm,
                                  coupling::DeformedGipaClosedForm, coupling::SynthesizedGrid>;

/// A real, time-dependent coupling lambda(t).
class CouplingProfile {
public:
    CouplingProfile(CouplingKind kind, PhysicalParams params, double eta = kDefaultEta);

    /// Continuous evaluation used by the integrator. Closed forms and analytic
    /// synthesized profiles apply the limit rule only at exact 0/0 points.
    double operator()(double t) const;
    /// Values on a grid with the eta rule. A synthesized profile sampled on
    /// its own grid returns its stored values.
    std::vector<double> sample(const TimeGrid& grid) const;

    const CouplingKind& kind() const noexcept { return kind_; }
    const PhysicalParams& params() const noexcept { return params_; }
    double eta() const noexcept { return eta_; }
    /// Null unless the kind is SynthesizedGrid.
    const coupling::SynthesizedGrid* synthesized() const noexcept;

private:
    double evaluate(double t, double eta) const;

    CouplingKind kind_;
    PhysicalParams params_;
    double eta_;
};

/// Pointwise generalized synthesis, Lambda_n = -W' / (2 sqrt(n+1) sqrt(1 - W^2)).
/// Where 1 - W^2 <= eta^2 returns sqrt(|W''|) / (2 sqrt(n+1)) with the sign of
/// -W' at t (of -W'' where W' vanishes) and sets *regularized.
double gipa_value(const InversionTarget& target, int n, double t, double eta,
                  bool* regularized = nullptr);

/// Generalized inverse problem approach for an initial |e,n> state.
CouplingProfile gipa(const InversionTarget& target, int n, const TimeGrid& grid,
                     double eta = kDefaultEta);

/// Vacuum inverse problem approach; identical to gipa(target, 0, grid).
CouplingProfile ipa(const InversionTarget& target, const TimeGrid& grid,
                    double eta = kDefaultEta);

/// Closed-form coupling for the cos^2(Omega_n t / 2) target.
double cos_squared_closed_form(int n, const PhysicalParams& params, double t,
                               double eta = kDefaultEta);

/// Closed-form coupling for one deformed sector term. Throws DomainError if
/// the radicand is below -1e-12.
double deformed_gipa_closed_form(int n, const PhysicalParams& params, double t,
                                 double eta = kDefaultEta,
                                 Radicand radicand = Radicand::exact);

/// Pointwise a - b on the grid.
std::vector<double> delta_lambda(const CouplingProfile& a, const CouplingProfile& b,
                                 const TimeGrid& grid);

/// True at grid indices within `half_width` steps of a regularized point.
std::vector<bool> regularized_window_mask(std::size_t grid_size,
                                          const std::vector<std::size_t>& regularized_points,
                                          std::size_t half_width = kRegularizedWindow);

}  // namespace jcipa
