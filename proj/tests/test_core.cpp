#include "jcipa/core.hpp"
#include "jcipa/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace jcipa;

namespace {

// Direct product e^-m m^n / n!, no logarithms.
double poisson_direct(double mean, int n) {
    double p = std::exp(-mean);
    for (int k = 1; k <= n; ++k) p *= mean / k;
    return p;
}

}  // namespace

TEST_CASE("weight: closed forms at n = 0") {
    CHECK(weight(Poisson{5.0}, 0) == doctest::Approx(std::exp(-5.0)).epsilon(1e-14));
    CHECK(weight(BoseEinstein{5.0}, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(weight(Fock{7}, 7) == 1.0);
    CHECK(weight(Fock{7}, 6) == 0.0);
}

TEST_CASE("weight: Poisson log space matches direct products for n <= 20") {
    for (double mean : {0.5, 1.0, 5.0, 12.5}) {
        for (int n = 0; n <= 20; ++n) {
            const double direct = poisson_direct(mean, n);
            CHECK(std::abs(weight(Poisson{mean}, n) - direct) <= 1e-12 * direct);
        }
    }
    // golden value from 40-digit summation
    CHECK(weight(Poisson{5.0}, 5) == doctest::Approx(0.17546736976785070564).epsilon(1e-13));
}

TEST_CASE("weight: large means do not overflow") {
    const double p = weight(Poisson{1e4}, 10000);
    CHECK(std::isfinite(p));
    CHECK(p == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * 1e4)).epsilon(1e-4));
    CHECK(std::isfinite(weight(BoseEinstein{1e4}, 50000)));
}

TEST_CASE("weight: zero mean degenerates to vacuum") {
    CHECK(weight(Poisson{0.0}, 0) == 1.0);
    CHECK(weight(Poisson{0.0}, 3) == 0.0);
    CHECK(weight(BoseEinstein{0.0}, 0) == 1.0);
    CHECK(truncation_index(Poisson{0.0}) == 0);
}

TEST_CASE("truncation_index: Fock returns its photon number") {
    CHECK(truncation_index(Fock{7}, 1e-3) == 7);
    CHECK(truncation_index(Fock{7}, 1e-12) == 7);
}

TEST_CASE("truncation_index: Poisson cumulative-sum oracle") {
    for (double mean : {0.3, 5.0, 20.0}) {
        const int N = truncation_index(Poisson{mean}, 1e-12);
        double mass = 0.0;
        for (int n = 0; n <= N; ++n) mass += poisson_direct(mean, n);
        CHECK(mass >= 1.0 - 1e-12 - 1e-15);
        double shorter = mass - poisson_direct(mean, N);
        CHECK(shorter < 1.0 - 1e-12);
    }
}

TEST_CASE("truncation_index: Bose-Einstein geometric tail") {
    const double m = 5.0;
    const int N = truncation_index(BoseEinstein{m}, 1e-12);
    const double r = m / (m + 1.0);
    CHECK(std::pow(r, N + 1) <= 1e-12);
    CHECK(std::pow(r, N) > 1e-12);
    CHECK(N == 151);
}

TEST_CASE("truncated weights sum to one and stay nonnegative") {
    for (PhotonStatistics s : {PhotonStatistics{Poisson{5.0}}, PhotonStatistics{BoseEinstein{5.0}},
                               PhotonStatistics{Fock{3}}}) {
        const int N = truncation_index(s);
        double raw = 0.0;
        for (int n = 0; n <= N; ++n) raw += weight(s, n);
        CHECK(raw >= 1.0 - 1e-12);
        CHECK(raw <= 1.0 + 1e-12);
        for (int n = 0; n <= 10 * N + 10; ++n) CHECK(weight(s, n) >= 0.0);

        const auto w = truncated_weights(s);
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("truncation_index rejects tolerances outside (0, 1)") {
    CHECK_THROWS_AS(truncation_index(Poisson{5.0}, 0.0), DomainError);
    CHECK_THROWS_AS(truncation_index(Poisson{5.0}, 1.0), DomainError);
}

TEST_CASE("rabi_frequency") {
    PhysicalParams p;
    p.lambda0 = 1.0;
    CHECK(rabi_frequency(p, 0).value == 2.0);
    CHECK(rabi_frequency(p, 3).value == 4.0);
    p.lambda0 = 0.5;
    CHECK(rabi_frequency(p, 5).value == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
    double prev = 0.0;
    for (int n = 0; n < 50; ++n) {
        CHECK(rabi_frequency(p, n).value > prev);
        prev = rabi_frequency(p, n).value;
    }
    CHECK_THROWS_AS(rabi_frequency(p, -1), DomainError);
}

TEST_CASE("PhysicalParams validation") {
    PhysicalParams p;
    p.epsilon = 5e-4;
    CHECK(p.validate().empty());
    p.epsilon = 5e-3;
    CHECK(p.validate().size() == 1);
    p.epsilon = 0.1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.epsilon = 0.0;
    p.lambda0 = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.lambda0 = 1.0;
    p.mean_n = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("TimeGrid is uniform with exact endpoints") {
    const TimeGrid g(0.0, 25.0, 2001);
    CHECK(g.step() == 0.0125);
    CHECK(g[0] == 0.0);
    CHECK(g[2000] == 25.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 10), DomainError);
}
