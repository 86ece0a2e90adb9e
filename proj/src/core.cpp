#include "jcipa/core.hpp"

#include "jcipa/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

namespace jcipa {

std::vector<std::string> PhysicalParams::validate() const {
    auto fail = [](const std::string& field, const std::string& why, double v) {
        std::ostringstream os;
        os << field << " = " << v << ": " << why;
        throw DomainError(os.str());
    };
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) fail("lambda0", "must be positive", lambda0);
    if (!(zeta > 0.0) || !std::isfinite(zeta)) fail("zeta", "must be positive", zeta);
    if (!(mean_n >= 0.0) || !std::isfinite(mean_n)) fail("mean_n", "must be nonnegative", mean_n);
    if (!(epsilon >= 0.0)) fail("epsilon", "must be nonnegative", epsilon);
    if (epsilon > kEpsilonHardLimit) fail("epsilon", "exceeds the hard limit 1e-2", epsilon);
    if (!std::isfinite(detuning)) fail("detuning", "must be finite", detuning);

    std::vector<std::string> warnings;
    if (epsilon > kEpsilonSoftBound) {
        std::ostringstream os;
        os << "epsilon = " << epsilon
           << " is above the 5e-4 working bound; first-order deformation may be inaccurate";
        warnings.push_back(os.str());
    }
    return warnings;
}

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_samples)
    : t_start_(t_start), t_end_(t_end), n_samples_(n_samples) {
    if (n_samples < 2) throw DomainError("time grid needs at least 2 samples");
    if (!(t_end > t_start) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
        throw DomainError("time grid must satisfy t_start < t_end");
    }
    step_ = (t_end - t_start) / static_cast<double>(n_samples - 1);
}

double TimeGrid::operator[](std::size_t i) const noexcept {
    if (i + 1 == n_samples_) return t_end_;
    return t_start_ + static_cast<double>(i) * step_;
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(n_samples_);
    for (std::size_t i = 0; i < n_samples_; ++i) out[i] = (*this)[i];
    return out;
}

bool TimeGrid::contains(double t) const noexcept {
    return t >= t_start_ && t <= t_end_;
}

std::string describe(const PhotonStatistics& stats) {
    std::ostringstream os;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Fock>) os << "fock(" << s.n << ")";
            if constexpr (std::is_same_v<T, Poisson>) os << "poisson(" << s.mean << ")";
            if constexpr (std::is_same_v<T, BoseEinstein>) os << "bose_einstein(" << s.mean << ")";
        },
        stats);
    return os.str();
}

namespace {

double poisson_log_weight(double mean, int n) {
    return n * std::log(mean) - mean - boost::math::lgamma(static_cast<double>(n) + 1.0);
}

double bose_einstein_log_weight(double mean, int n) {
    return n * std::log(mean) - (n + 1) * std::log1p(mean);
}

// P(X > N) for a Poisson variable.
double poisson_tail(double mean, int N) {
    return boost::math::gamma_p(static_cast<double>(N) + 1.0, mean);
}

}  // namespace

double weight(const PhotonStatistics& stats, int n) {
    if (n < 0) throw DomainError("photon number must be nonnegative");
    return std::visit(
        [n](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Fock>) {
                return n == s.n ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                if (s.mean == 0.0) return n == 0 ? 1.0 : 0.0;
                return std::exp(poisson_log_weight(s.mean, n));
            } else {
                if (s.mean == 0.0) return n == 0 ? 1.0 : 0.0;
                return std::exp(bose_einstein_log_weight(s.mean, n));
            }
        },
        stats);
}

int truncation_index(const PhotonStatistics& stats, double tail_tol) {
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("tail tolerance must lie in (0, 1)");
    return std::visit(
        [tail_tol](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Fock>) {
                if (s.n < 0) throw DomainError("Fock photon number must be nonnegative");
                return s.n;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                if (s.mean < 0.0) throw DomainError("Poisson mean must be nonnegative");
                if (s.mean == 0.0) return 0;
                // the tail is monotone in N: bracket, then bisect
                int lo = -1;
                int hi = std::max(1, static_cast<int>(s.mean));
                while (poisson_tail(s.mean, hi) > tail_tol) {
                    lo = hi;
                    hi *= 2;
                }
                while (hi - lo > 1) {
                    int mid = lo + (hi - lo) / 2;
                    if (poisson_tail(s.mean, mid) > tail_tol) lo = mid; else hi = mid;
                }
                return hi;
            } else {
                if (s.mean < 0.0) throw DomainError("Bose-Einstein mean must be nonnegative");
                if (s.mean == 0.0) return 0;
                // tail mass beyond N is (m / (m + 1))^(N + 1)
                const double log_ratio = std::log(s.mean) - std::log1p(s.mean);
                int N = std::max(0, static_cast<int>(std::ceil(std::log(tail_tol) / log_ratio)) - 1);
                while (N > 0 && (N) * log_ratio <= std::log(tail_tol)) --N;
                while ((N + 1) * log_ratio > std::log(tail_tol)) ++N;
                return N;
            }
        },
        stats);
}

std::vector<double> truncated_weights(const PhotonStatistics& stats, double tail_tol) {
    const int N = truncation_index(stats, tail_tol);
    std::vector<double> w(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) w[static_cast<std::size_t>(n)] = weight(stats, n);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return w;
}

RabiFrequency rabi_frequency(const PhysicalParams& params, int n) {
    if (n < 0) throw DomainError("photon number must be nonnegative");
    return {2.0 * params.lambda0 * std::sqrt(static_cast<double>(n) + 1.0)};
}

}  // namespace jcipa
