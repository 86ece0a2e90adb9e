#include "jcipa/error.hpp"
#include "jcipa/inversion.hpp"
#include "jcipa/kappa.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace jcipa;

namespace {

PhysicalParams reference_params(double eps = 0.0) {
    PhysicalParams p;
    p.lambda0 = 1.0;
    p.mean_n = 5.0;
    p.epsilon = eps;
    return p;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("s_n: resonance, start, and detuned golden value") {
    PhysicalParams p = reference_params();
    CHECK(s_n(3, 0.0, p) == 0.0);
    for (int n : {0, 2, 7}) {
        for (double t : {0.1, 1.3, 7.7}) {
            CHECK(s_n(n, t, p) == doctest::Approx((1.0 - std::cos(omega(p, n) * t)) / 2.0));
        }
    }
    p.detuning = 10.0 * omega(p, 0);
    const double v = s_n(0, 1.0, p);
    CHECK(v <= 1.0 / 101.0);
    // 40-digit evaluation of (4/404) sin^2(sqrt(404)/2)
    CHECK(std::abs(v - 0.0033904108908978390051) < 1e-15);
}

TEST_CASE("s_n stays within its detuned amplitude") {
    PhysicalParams p = reference_params();
    for (double delta : {-3.0, 0.0, 0.5, 20.0}) {
        p.detuning = delta;
        for (int n = 0; n < 12; ++n) {
            const double w = omega(p, n);
            const double amp = w * w / (delta * delta + w * w);
            for (int i = 0; i < 300; ++i) {
                const double s = s_n(n, 0.1 * i, p);
                CHECK(s >= 0.0);
                CHECK(s <= amp + 1e-15);
            }
        }
    }
}

TEST_CASE("expected_sz: start value and twice-spin identity") {
    for (double eps : {0.0, 5e-4}) {
        const PhysicalParams p = reference_params(eps);
        CHECK(expected_sz(0.0, p) == 0.5);
        const InversionTarget w(target::DeformedCoherentSeries{}, p);
        for (int i = 0; i <= 2500; ++i) {
            const double t = 0.01 * i;
            CHECK(std::abs(2.0 * expected_sz(t, p) - w.eval(t)) <= 1e-10);
        }
    }
    // 40-digit summation at t = 2
    CHECK(std::abs(2.0 * expected_sz(2.0, reference_params(5e-4)) + 0.1698372910266598948) < 1e-12);
}

TEST_CASE("expected_sz with eps = 0 is half the coherent series") {
    const PhysicalParams p = reference_params(0.0);
    const InversionTarget w(target::CoherentSeries{}, p);
    for (int i = 0; i <= 500; ++i) {
        const double t = 0.05 * i;
        CHECK(std::abs(expected_sz(t, p) - 0.5 * w.eval(t)) <= 1e-12);
    }
}

TEST_CASE("expected_sz respects the first-order bound") {
    const PhysicalParams p = reference_params(5e-4);
    for (double delta : {0.0, 1.0, 4.0}) {
        PhysicalParams q = p;
        q.detuning = delta;
        for (int i = 0; i <= 1000; ++i) {
            const double sz = expected_sz(0.025 * i, q);
            CHECK(sz >= -0.5 - 10.0 * q.epsilon);
            CHECK(sz <= 0.5 + 10.0 * q.epsilon);
        }
    }
}

TEST_CASE("deformed scenario at eps = 0 has no differences") {
    const TimeGrid grid(0.0, 25.0, 1001);
    const DeformedScenario d = deformed_scenario(reference_params(0.0), grid);
    CHECK(max_abs(d.delta_w) == 0.0);
    CHECK(max_abs(d.delta_lambda) == 0.0);
}

TEST_CASE("deformed scenario: coupling and inversion differences coincide in time") {
    const TimeGrid grid(0.0, 25.0, 2001);
    const DeformedScenario d = deformed_scenario(reference_params(5e-4), grid);
    CHECK(d.deformed.max_residual_outside() <= 1e-6);
    CHECK(d.undeformed.max_residual_outside() <= 1e-6);
    CHECK(max_abs(d.coherent_gipa.residuals) <= 1e-6);

    const double dw_max = max_abs(d.delta_w);
    const double dl_max = max_abs(d.delta_lambda);
    CHECK(dw_max > 0.0);
    CHECK(dl_max > 0.0);
    // windows of one time unit across the collapse and revival
    const std::size_t width = 80;
    for (std::size_t start = 0; start + width <= grid.size(); start += width) {
        double dw = 0.0, dl = 0.0;
        for (std::size_t i = start; i < start + width; ++i) {
            dw = std::max(dw, std::abs(d.delta_w[i]));
            dl = std::max(dl, std::abs(d.delta_lambda[i]));
        }
        CAPTURE(grid[start]);
        if (dl > 0.1 * dl_max) CHECK(dw > 0.1 * dw_max);
    }
}

TEST_CASE("deformed scenario requires resonance") {
    PhysicalParams p = reference_params(5e-4);
    p.detuning = 1.0;
    CHECK_THROWS_AS(deformed_scenario(p, TimeGrid(0.0, 1.0, 11)), DomainError);
}
