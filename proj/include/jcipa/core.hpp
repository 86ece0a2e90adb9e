#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace jcipa {

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr double kEpsilonHardLimit = 1e-2;
inline constexpr double kEpsilonSoftBound = 5e-4;

/// Physical parameters shared by every module. Times are in units of 1/lambda0
/// when lambda0 = 1.
struct PhysicalParams {
    double lambda0 = 1.0;   // coupling amplitude
    double zeta = 1.0;      // time-scale rate of the sqrt(t) coupling
    double epsilon = 0.0;   // dimensionless deformation
    double mean_n = 5.0;    // mean photon number
    double detuning = 0.0;  // atom minus cavity frequency

    /// Throws DomainError on hard violations; returns soft warnings
    /// (epsilon above the soft bound but below the hard limit).
    std::vector<std::string> validate() const;
};

/// Uniform, strictly increasing sampling of [t_start, t_end].
class TimeGrid {
public:
    TimeGrid(double t_start, double t_end, std::size_t n_samples);

    double t_start() const noexcept { return t_start_; }
    double t_end() const noexcept { return t_end_; }
    std::size_t size() const noexcept { return n_samples_; }
    double step() const noexcept { return step_; }

    /// Exact endpoints at i = 0 and i = size() - 1.
    double operator[](std::size_t i) const noexcept;
    std::vector<double> times() const;

    bool contains(double t) const noexcept;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t_start_;
    double t_end_;
    std::size_t n_samples_;
    double step_;
};

struct Fock {
    int n = 0;
};
struct Poisson {
    double mean = 0.0;
};
struct BoseEinstein {
    double mean = 0.0;
};

/// Initial photon-number distribution of the cavity mode.
using PhotonStatistics = std::variant<Fock, Poisson, BoseEinstein>;

std::string describe(const PhotonStatistics& stats);

/// Probability of n photons. Poisson and Bose-Einstein are evaluated in log
/// space so large means do not overflow.
double weight(const PhotonStatistics& stats, int n);

/// Smallest N with cumulative mass >= 1 - tail_tol; the photon number for Fock.
int truncation_index(const PhotonStatistics& stats, double tail_tol = kDefaultTailTol);

/// Weights 0..truncation_index, renormalized to sum to one over the kept
/// sectors. Series and pipelines use these so that W(0) = 1 exactly.
std::vector<double> truncated_weights(const PhotonStatistics& stats,
                                      double tail_tol = kDefaultTailTol);

/// Rabi frequency of the n-photon sector, Omega_n = 2 lambda0 sqrt(n + 1).
struct RabiFrequency {
    double value;
};

RabiFrequency rabi_frequency(const PhysicalParams& params, int n);

/// Convenience: Omega_n as a plain double.
inline double omega(const PhysicalParams& params, int n) {
    return rabi_frequency(params, n).value;
}

}  // namespace jcipa
