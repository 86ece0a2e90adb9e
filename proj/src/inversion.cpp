#include "jcipa/inversion.hpp"

#include "jcipa/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jcipa {

namespace {

// Adds a * cos(omega t) to the jet.
void add_cosine(InversionJet& j, double a, double omega, double t) {
    const double s = std::sin(0.5 * omega * t);
    const double c = std::cos(0.5 * omega * t);
    const double cos_full = (c - s) * (c + s);
    const double sin_full = 2.0 * s * c;
    j.value += a * cos_full;
    j.first -= a * omega * sin_full;
    j.second -= a * omega * omega * cos_full;
    j.one_minus += a * 2.0 * s * s;
    j.one_plus += a * 2.0 * c * c;
}

// Adds a * cos^2(omega t / 2) to the jet.
void add_cosine_squared(InversionJet& j, double a, double omega, double t) {
    const double s = std::sin(0.5 * omega * t);
    const double c = std::cos(0.5 * omega * t);
    j.value += a * c * c;
    j.first -= a * omega * s * c;
    j.second -= a * 0.5 * omega * omega * (c - s) * (c + s);
    j.one_minus += a * s * s;
    j.one_plus += a * (1.0 + c * c);
}

// Adds a * {cos(Omega_n t) + d [cos(Omega_{n+2} t) - cos(Omega_n t)]}, d = eps <n>.
void add_deformed_summand(InversionJet& j, double a, const PhysicalParams& p, int n, double t) {
    const double d = p.epsilon * p.mean_n;
    add_cosine(j, a * (1.0 - d), omega(p, n), t);
    if (d != 0.0) add_cosine(j, a * d, omega(p, n + 2), t);
}

void require_sector(int n) {
    if (n < 0) throw DomainError("sector photon number must be nonnegative");
}

}  // namespace

InversionTarget::InversionTarget(TargetKind kind, PhysicalParams params, double tail_tol)
    : kind_(std::move(kind)), params_(params), tail_tol_(tail_tol) {
    std::visit(
        [this](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, target::ConstantCoupling> ||
                          std::is_same_v<T, target::CosSquared> ||
                          std::is_same_v<T, target::DeformedSectorSummand>) {
                require_sector(k.n);
            } else if constexpr (std::is_same_v<T, target::CoherentSeries> ||
                                 std::is_same_v<T, target::DeformedCoherentSeries>) {
                weights_ = truncated_weights(Poisson{params_.mean_n}, tail_tol_);
            } else if constexpr (std::is_same_v<T, target::ThermalCosSquaredSeries>) {
                weights_ = truncated_weights(BoseEinstein{params_.mean_n}, tail_tol_);
            } else if constexpr (std::is_same_v<T, target::Sampled>) {
                const auto& v = k.values;
                const std::size_t m = v.size();
                if (m != k.grid.size()) {
                    throw DomainError("sampled inversion: value count does not match grid");
                }
                const double h = k.grid.step();
                nodal_first_.resize(m);
                nodal_second_.resize(m);
                if (m == 2) {
                    nodal_first_[0] = nodal_first_[1] = (v[1] - v[0]) / h;
                    nodal_second_[0] = nodal_second_[1] = 0.0;
                    return;
                }
                for (std::size_t i = 1; i + 1 < m; ++i) {
                    nodal_first_[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
                    nodal_second_[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
                }
                nodal_first_[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
                nodal_first_[m - 1] = (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]) / (2.0 * h);
                nodal_second_[0] = nodal_second_[1];
                nodal_second_[m - 1] = nodal_second_[m - 2];
            }
        },
        kind_);
}

bool InversionTarget::analytic() const noexcept {
    return !std::holds_alternative<target::Sampled>(kind_);
}

InversionJet InversionTarget::jet(double t) const {
    if (const auto* s = std::get_if<target::Sampled>(&kind_)) return sampled_jet(*s, t);
    if (!(t >= 0.0)) {
        std::ostringstream os;
        os << name() << ": time must be nonnegative, got " << t;
        throw DomainError(os.str());
    }

    InversionJet j;
    const PhysicalParams& p = params_;
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, target::ConstantCoupling>) {
                add_cosine(j, 1.0, omega(p, k.n), t);
            } else if constexpr (std::is_same_v<T, target::SqrtTime>) {
                // phase (4/3) lambda0 sqrt(zeta) t^(3/2)
                const double rate = p.lambda0 * std::sqrt(p.zeta);
                const double phase = (4.0 / 3.0) * rate * t * std::sqrt(t);
                const double phase_dot = 2.0 * rate * std::sqrt(t);
                const double s = std::sin(0.5 * phase);
                const double c = std::cos(0.5 * phase);
                const double cos_full = (c - s) * (c + s);
                const double sin_full = 2.0 * s * c;
                j.value = cos_full;
                j.first = -phase_dot * sin_full;
                // phase'' sin(phase) -> 0 as t -> 0
                const double phase_ddot_sin = t > 0.0 ? rate / std::sqrt(t) * sin_full : 0.0;
                j.second = -phase_ddot_sin - phase_dot * phase_dot * cos_full;
                j.one_minus = 2.0 * s * s;
                j.one_plus = 2.0 * c * c;
            } else if constexpr (std::is_same_v<T, target::CosSquared>) {
                add_cosine_squared(j, 1.0, omega(p, k.n), t);
            } else if constexpr (std::is_same_v<T, target::CoherentSeries>) {
                for (std::size_t n = 0; n < weights_.size(); ++n) {
                    add_cosine(j, weights_[n], omega(p, static_cast<int>(n)), t);
                }
            } else if constexpr (std::is_same_v<T, target::DeformedCoherentSeries>) {
                for (std::size_t n = 0; n < weights_.size(); ++n) {
                    add_deformed_summand(j, weights_[n], p, static_cast<int>(n), t);
                }
            } else if constexpr (std::is_same_v<T, target::DeformedSectorSummand>) {
                add_deformed_summand(j, 1.0, p, k.n, t);
            } else if constexpr (std::is_same_v<T, target::ThermalCosSquaredSeries>) {
                for (std::size_t n = 0; n < weights_.size(); ++n) {
                    add_cosine_squared(j, weights_[n], omega(p, static_cast<int>(n)), t);
                }
            }
        },
        kind_);
    return j;
}

InversionJet InversionTarget::sampled_jet(const target::Sampled& s, double t) const {
    const TimeGrid& g = s.grid;
    const double slack = 1e-12 * (g.t_end() - g.t_start());
    if (!(t >= g.t_start() - slack && t <= g.t_end() + slack)) {
        std::ostringstream os;
        os << "sampled inversion evaluated at t = " << t << " outside [" << g.t_start() << ", "
           << g.t_end() << "]";
        throw OutOfRangeError(os.str());
    }
    const double u = std::clamp((t - g.t_start()) / g.step(), 0.0,
                                static_cast<double>(g.size() - 1));
    std::size_t i = std::min(static_cast<std::size_t>(u), g.size() - 2);
    const double frac = u - static_cast<double>(i);
    auto lerp = [&](const std::vector<double>& v) { return v[i] + frac * (v[i + 1] - v[i]); };

    InversionJet j;
    j.value = lerp(s.values);
    j.first = lerp(nodal_first_);
    j.second = lerp(nodal_second_);
    j.one_minus = 1.0 - j.value;
    j.one_plus = 1.0 + j.value;
    return j;
}

std::vector<double> InversionTarget::sample(const TimeGrid& grid) const {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = eval(grid[i]);
    return out;
}

std::string InversionTarget::name() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, target::ConstantCoupling>) os << "constant_coupling(n=" << k.n << ")";
            if constexpr (std::is_same_v<T, target::SqrtTime>) os << "sqrt_time";
            if constexpr (std::is_same_v<T, target::CosSquared>) os << "cos_squared(n=" << k.n << ")";
            if constexpr (std::is_same_v<T, target::CoherentSeries>) os << "coherent_series";
            if constexpr (std::is_same_v<T, target::DeformedCoherentSeries>) os << "deformed_coherent_series";
            if constexpr (std::is_same_v<T, target::DeformedSectorSummand>) os << "deformed_sector_summand(n=" << k.n << ")";
            if constexpr (std::is_same_v<T, target::ThermalCosSquaredSeries>) os << "thermal_cos_squared_series";
            if constexpr (std::is_same_v<T, target::Sampled>) os << "sampled(" << k.values.size() << ")";
        },
        kind_);
    return os.str();
}

}  // namespace jcipa
