#include "jcipa/synth.hpp"

#include "jcipa/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jcipa {

namespace {

constexpr double kStartTolerance = 1e-9;
constexpr double kOvershootTolerance = 1e-9;

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Sign of the coupling at a 0/0 point, seen from the side t lies on.
double limit_sign(double minus_first, double minus_second) {
    if (minus_first != 0.0) return sign_of(minus_first);
    return sign_of(minus_second);
}

void require_resonance(const PhysicalParams& p) {
    if (p.detuning != 0.0) {
        throw DomainError("coupling synthesis is defined at resonance only (detuning must be 0)");
    }
}

}  // namespace

double gipa_value(const InversionTarget& target, int n, double t, double eta, bool* regularized) {
    if (n < 0) throw DomainError("sector photon number must be nonnegative");
    const InversionJet j = target.jet(t);
    if (std::abs(j.value) > 1.0 + kOvershootTolerance) {
        std::ostringstream os;
        os << target.name() << ": |W(" << t << ")| = " << std::abs(j.value)
           << " exceeds 1; the synthesis square root is undefined";
        throw DomainError(os.str());
    }
    const double scale = std::sqrt(static_cast<double>(n) + 1.0);
    const double radicand = j.one_minus * j.one_plus;
    if (radicand <= eta * eta) {
        if (regularized) *regularized = true;
        const double magnitude = std::sqrt(std::abs(j.second)) / 2.0 / scale;
        return limit_sign(-j.first, -j.second) * magnitude;
    }
    if (regularized) *regularized = false;
    return -j.first / (2.0 * std::sqrt(radicand)) / scale;
}

CouplingProfile gipa(const InversionTarget& target, int n, const TimeGrid& grid, double eta) {
    require_resonance(target.params());
    const double w0 = target.eval(grid.t_start());
    if (std::abs(w0 - 1.0) > kStartTolerance) {
        std::ostringstream os;
        os << target.name() << ": W(t_start) = " << w0
           << "; synthesis assumes the atom starts excited (W = 1)";
        throw DomainError(os.str());
    }

    coupling::SynthesizedGrid out{grid, std::vector<double>(grid.size()), {}, n,
                                  std::make_shared<const InversionTarget>(target)};
    std::vector<bool> singular(grid.size(), false);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        bool reg = false;
        out.values[i] = gipa_value(target, n, grid[i], eta, &reg);
        singular[i] = reg;
        if (reg) out.regularized_points.push_back(i);
    }

    // Regularized points take the sign of the nearest non-singular neighbour.
    for (std::size_t i : out.regularized_points) {
        for (std::size_t d = 1; d < grid.size(); ++d) {
            const bool has_left = i >= d && !singular[i - d];
            const bool has_right = i + d < grid.size() && !singular[i + d];
            if (!has_left && !has_right) continue;
            const double neighbour = has_left ? out.values[i - d] : out.values[i + d];
            out.values[i] = std::copysign(out.values[i], neighbour == 0.0 ? 1.0 : neighbour);
            break;
        }
    }
    return CouplingProfile(std::move(out), target.params(), eta);
}

CouplingProfile ipa(const InversionTarget& target, const TimeGrid& grid, double eta) {
    return gipa(target, 0, grid, eta);
}

double cos_squared_closed_form(int n, const PhysicalParams& params, double t, double eta) {
    const double w = omega(params, n);
    const double s = std::sin(0.5 * w * t);
    const double c = std::cos(0.5 * w * t);
    // 1 - cos^4 = sin^2 (1 + cos^2) on the half angle
    const double radicand = s * s * (1.0 + c * c);
    if (radicand <= eta * eta) {
        const double second = -0.5 * w * w * std::cos(w * t);
        const double magnitude =
            std::sqrt(std::abs(second)) / (2.0 * std::sqrt(static_cast<double>(n) + 1.0));
        return limit_sign(w * s * c, -second) * magnitude;
    }
    return params.lambda0 * std::sin(w * t) / (2.0 * std::sqrt(radicand));
}

double deformed_gipa_closed_form(int n, const PhysicalParams& params, double t, double eta,
                                 Radicand radicand_kind) {
    if (n < 0) throw DomainError("sector photon number must be nonnegative");
    const double d = params.epsilon * params.mean_n;
    const double wn = omega(params, n);
    const double wn2 = omega(params, n + 2);
    const double sin_n = std::sin(wn * t);
    const double sin_n2 = std::sin(wn2 * t);
    const double cos_n = std::cos(wn * t);
    const double cos_n2 = std::cos(wn2 * t);
    // cos(Omega_{n+2} t) - cos(Omega_n t) without cancellation
    const double cos_diff = -2.0 * std::sin(0.5 * (wn2 + wn) * t) * std::sin(0.5 * (wn2 - wn) * t);

    const double ratio = std::sqrt((n + 3.0) / (n + 1.0));
    const double numerator = params.lambda0 * (sin_n - d * (sin_n - ratio * sin_n2));
    double radicand = sin_n * sin_n - 2.0 * d * cos_n * cos_diff;
    if (radicand_kind == Radicand::exact) radicand -= d * d * cos_diff * cos_diff;

    if (radicand < -1e-12) {
        std::ostringstream os;
        os << "deformed closed-form coupling: negative radicand " << radicand << " at t = " << t
           << ", n = " << n << ", eps<n> = " << d;
        throw DomainError(os.str());
    }
    if (radicand <= eta * eta) {
        const double second = -((1.0 - d) * wn * wn * cos_n + d * wn2 * wn2 * cos_n2);
        const double magnitude =
            std::sqrt(std::abs(second)) / (2.0 * std::sqrt(static_cast<double>(n) + 1.0));
        return limit_sign(numerator, -second) * magnitude;
    }
    return numerator / std::sqrt(radicand);
}

CouplingProfile::CouplingProfile(CouplingKind kind, PhysicalParams params, double eta)
    : kind_(std::move(kind)), params_(params), eta_(eta) {
    if (!(eta >= 0.0)) throw DomainError("eta must be nonnegative");
}

const coupling::SynthesizedGrid* CouplingProfile::synthesized() const noexcept {
    return std::get_if<coupling::SynthesizedGrid>(&kind_);
}

double CouplingProfile::evaluate(double t, double eta) const {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, coupling::Constant>) {
                return k.lambda0;
            } else if constexpr (std::is_same_v<T, coupling::SqrtTime>) {
                if (t < 0.0) throw DomainError("sqrt(t) coupling needs t >= 0");
                return k.lambda0 * std::sqrt(k.zeta * t);
            } else if constexpr (std::is_same_v<T, coupling::CosSquaredClosedForm>) {
                return cos_squared_closed_form(k.n, params_, t, eta);
            } else if constexpr (std::is_same_v<T, coupling::DeformedGipaClosedForm>) {
                return deformed_gipa_closed_form(k.n, params_, t, eta, k.radicand);
            } else {
                if (k.source && k.source->analytic()) {
                    return gipa_value(*k.source, k.n, t, eta);
                }
                const TimeGrid& g = k.grid;
                const double slack = 1e-12 * (g.t_end() - g.t_start());
                if (!(t >= g.t_start() - slack && t <= g.t_end() + slack)) {
                    std::ostringstream os;
                    os << "synthesized coupling evaluated at t = " << t << " outside its grid";
                    throw OutOfRangeError(os.str());
                }
                const double u = std::clamp((t - g.t_start()) / g.step(), 0.0,
                                            static_cast<double>(g.size() - 1));
                const std::size_t i = std::min(static_cast<std::size_t>(u), g.size() - 2);
                const double frac = u - static_cast<double>(i);
                return k.values[i] + frac * (k.values[i + 1] - k.values[i]);
            }
        },
        kind_);
}

double CouplingProfile::operator()(double t) const { return evaluate(t, 0.0); }

std::vector<double> CouplingProfile::sample(const TimeGrid& grid) const {
    if (const auto* s = synthesized(); s && s->grid == grid) return s->values;
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = evaluate(grid[i], eta_);
    return out;
}

std::vector<double> delta_lambda(const CouplingProfile& a, const CouplingProfile& b,
                                 const TimeGrid& grid) {
    std::vector<double> va = a.sample(grid);
    const std::vector<double> vb = b.sample(grid);
    for (std::size_t i = 0; i < va.size(); ++i) va[i] -= vb[i];
    return va;
}

std::vector<bool> regularized_window_mask(std::size_t grid_size,
                                          const std::vector<std::size_t>& regularized_points,
                                          std::size_t half_width) {
    std::vector<bool> mask(grid_size, false);
    for (std::size_t i : regularized_points) {
        const std::size_t lo = i >= half_width ? i - half_width : 0;
        const std::size_t hi = std::min(grid_size - 1, i + half_width);
        for (std::size_t k = lo; k <= hi; ++k) mask[k] = true;
    }
    return mask;
}

}  // namespace jcipa
