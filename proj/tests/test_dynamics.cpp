#include "jcipa/dynamics.hpp"
#include "jcipa/error.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace jcipa;

namespace {

PhysicalParams reference_params(double eps = 0.0) {
    PhysicalParams p;
    p.lambda0 = 1.0;
    p.zeta = 1.0;
    p.mean_n = 5.0;
    p.epsilon = eps;
    return p;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("constant coupling gives cos(Omega_n t) in every sector") {
    const PhysicalParams p = reference_params();
    const TimeGrid grid(0.0, 10.0, 1001);
    const CouplingProfile lambda(coupling::Constant{1.0}, p);
    for (int n : {0, 1, 5, 20}) {
        const SectorTrajectory traj = propagate_sector(lambda, n, grid);
        CHECK(traj.inversion[0] == 1.0);
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            err = std::max(err, std::abs(traj.inversion[i] - std::cos(omega(p, n) * grid[i])));
        }
        CHECK(err <= 1e-8);
        CHECK(traj.max_norm_drift() <= 1e-9);
    }
}

TEST_CASE("sqrt(t) coupling reproduces its closed-form inversion") {
    const PhysicalParams p = reference_params();
    const TimeGrid grid(0.0, 6.0, 1201);
    const SectorTrajectory traj =
        propagate_sector(CouplingProfile(coupling::SqrtTime{1.0, 1.0}, p), 0, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        err = std::max(err, std::abs(traj.inversion[i] - std::cos(4.0 / 3.0 * std::sqrt(t * t * t))));
    }
    CHECK(err <= 1e-8);
}

TEST_CASE("zero coupling leaves the atom excited") {
    const TimeGrid grid(0.0, 5.0, 51);
    const SectorTrajectory traj =
        propagate_sector(CouplingProfile(coupling::Constant{0.0}, reference_params()), 3, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(traj.states[i].c_e == std::complex<double>(1.0, 0.0));
        CHECK(traj.inversion[i] == 1.0);
    }
}

TEST_CASE("phase-integral oracle closed forms") {
    const PhysicalParams p = reference_params();
    const TimeGrid grid(0.0, 6.0, 601);
    const auto constant = phase_integral_oracle(CouplingProfile(coupling::Constant{1.0}, p), 2, grid);
    const auto sqrt_time =
        phase_integral_oracle(CouplingProfile(coupling::SqrtTime{1.0, 1.0}, p), 0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        CHECK(std::abs(constant[i] - std::cos(omega(p, 2) * t)) <= 1e-12);
        CHECK(std::abs(sqrt_time[i] - std::cos(4.0 / 3.0 * std::sqrt(t * t * t))) <= 1e-11);
    }
}

TEST_CASE("propagation agrees with the phase-integral oracle on synthesized profiles") {
    const PhysicalParams p = reference_params(5e-4);
    const TimeGrid grid(0.0, 25.0, 2001);
    SUBCASE("vacuum coupling for the coherent series") {
        const CouplingProfile lambda = ipa(InversionTarget(target::CoherentSeries{}, p), grid);
        const auto traj = propagate_sector(lambda, 0, grid);
        CHECK(max_abs_diff(traj.inversion, phase_integral_oracle(lambda, 0, grid)) <= 1e-8);
        CHECK(traj.max_norm_drift() <= 1e-9);
    }
    SUBCASE("cos^2 coupling in sector 5, with sign jumps") {
        const CouplingProfile lambda = gipa(InversionTarget(target::CosSquared{5}, p), 5, grid);
        const auto traj = propagate_sector(lambda, 5, grid);
        CHECK(max_abs_diff(traj.inversion, phase_integral_oracle(lambda, 5, grid)) <= 1e-8);
    }
    SUBCASE("linearly interpolated profile from a sampled target") {
        const TimeGrid coarse(0.0, 5.0, 501);
        std::vector<double> w(coarse.size());
        for (std::size_t i = 0; i < coarse.size(); ++i) w[i] = std::cos(1.5 * coarse[i] * coarse[i] / 5.0);
        const CouplingProfile lambda = ipa(InversionTarget(target::Sampled{coarse, w}, p), coarse);
        const auto traj = propagate_sector(lambda, 0, coarse);
        CHECK(max_abs_diff(traj.inversion, phase_integral_oracle(lambda, 0, coarse)) <= 1e-8);
    }
}

TEST_CASE("round trip for closed-form targets in sectors 0, 1, 2, 5") {
    const PhysicalParams p = reference_params(5e-4);
    const TimeGrid grid(0.0, 25.0, 2001);
    for (int n : {0, 1, 2, 5}) {
        for (const InversionTarget& target :
             {InversionTarget(target::ConstantCoupling{n}, p), InversionTarget(target::CosSquared{n}, p),
              InversionTarget(target::DeformedSectorSummand{n}, p), InversionTarget(target::SqrtTime{}, p),
              InversionTarget(target::CoherentSeries{}, p),
              InversionTarget(target::DeformedCoherentSeries{}, p)}) {
            CAPTURE(n);
            CAPTURE(target.name());
            const ScenarioResult r = run_single_sector(target, n, grid);
            CHECK(r.max_residual_outside() <= 1e-6);
            CHECK(r.max_residual_inside() <= 1e-4);
            CHECK(r.max_norm_drift <= 1e-9);
        }
    }
}

TEST_CASE("Fock statistics reduce the pipeline to one sector exactly") {
    const PhysicalParams p = reference_params();
    const TimeGrid grid(0.0, 10.0, 801);
    auto family = [&](int n) { return InversionTarget(target::CosSquared{n}, p); };
    const ScenarioResult pipeline = run_gipa_pipeline(family, Fock{4}, p, grid);
    const SectorTrajectory single = propagate_sector(gipa(family(4), 4, grid), 4, grid);
    CHECK(pipeline.reproduced_w == single.inversion);
    CHECK(pipeline.sector_count == 1);
    CHECK(pipeline.coupling_sector == 4);
}

TEST_CASE("pipeline reproduces the coherent series from constant-coupling sectors") {
    const PhysicalParams p = reference_params();
    const TimeGrid grid(0.0, 25.0, 1001);
    const ScenarioResult r = run_gipa_pipeline(
        [&](int n) { return InversionTarget(target::ConstantCoupling{n}, p); }, Poisson{5.0}, p,
        grid);
    const InversionTarget series(target::CoherentSeries{}, p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(r.reproduced_w[i] - series.eval(grid[i])) <= 1e-6);
    }
}

TEST_CASE("pipeline results do not depend on the thread count") {
    const PhysicalParams p = reference_params();
    const TimeGrid grid(0.0, 10.0, 401);
    auto family = [&](int n) { return InversionTarget(target::CosSquared{n}, p); };
    PropagationOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const auto a = run_gipa_pipeline(family, BoseEinstein{2.0}, p, grid, 1e-8, kDefaultEta, one);
    const auto b = run_gipa_pipeline(family, BoseEinstein{2.0}, p, grid, 1e-8, kDefaultEta, many);
    CHECK(a.reproduced_w == b.reproduced_w);
    CHECK(a.coupling_values == b.coupling_values);
}

TEST_CASE("pipeline errors are tagged with the sector") {
    const PhysicalParams p = reference_params();
    const TimeGrid grid(0.0, 1.0, 11);
    auto family = [&](int n) { return InversionTarget(target::ConstantCoupling{n}, p); };
    auto broken = [&](int n) -> CouplingProfile {
        if (n == 2) throw DomainError("boom");
        return CouplingProfile(coupling::Constant{1.0}, p);
    };
    try {
        (void)run_sector_pipeline(family, broken, Poisson{1.0}, grid);
        FAIL("expected an error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("sector 2") != std::string::npos);
    }
}

TEST_CASE("integrator reports step-size underflow") {
    const PhysicalParams p = reference_params();
    const TimeGrid grid(0.0, 1.0, 11);
    IntegratorOptions opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-300;
    try {
        (void)propagate_sector(CouplingProfile(coupling::Constant{1.0}, p), 0, grid, opt);
        FAIL("expected an integration error");
    } catch (const IntegrationError& e) {
        CHECK(e.time() >= 0.0);
        CHECK(e.time() < 1.0);
    }
}

TEST_CASE("delta_w") {
    const std::vector<double> a{1.0, 0.5, -0.25};
    CHECK(delta_w(a, a) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(delta_w(a, {0.0, 0.0, 0.0}) == a);
    CHECK_THROWS_AS(delta_w(a, {1.0}), DomainError);
}
