#include "jcipa/dynamics.hpp"

#include "jcipa/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace jcipa {

double SectorTrajectory::max_norm_drift() const {
    double worst = 0.0;
    for (const SectorState& s : states) worst = std::max(worst, std::abs(s.norm() - 1.0));
    return worst;
}

namespace {

double max_abs_masked(const std::vector<double>& v, const std::vector<bool>& mask, bool inside) {
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (mask[i] == inside) worst = std::max(worst, std::abs(v[i]));
    }
    return worst;
}

// Synthesized couplings only jump by flipping sign. Returns the last point of [a, b) that
// keeps the sign of f(a), to within a few ulps of the change.
template <class F>
double locate_sign_change(const F& f, double a, double b, double fa) {
    double lo = a;
    double hi = b;
    while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((f(mid) * fa > 0.0) ? lo : hi) = mid;
    }
    return lo;
}

// Sign changes of the coupling between consecutive grid nodes.
std::vector<double> sign_changes(const CouplingProfile& coupling, const std::vector<double>& times) {
    std::vector<double> out;
    double prev = coupling(times.front());
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double cur = coupling(times[i]);
        if (prev * cur < 0.0) out.push_back(locate_sign_change(coupling, times[i - 1], times[i], prev));
        prev = cur;
    }
    return out;
}

}  // namespace

double ScenarioResult::max_residual_outside(std::size_t half_width) const {
    return max_abs_masked(residuals,
                          regularized_window_mask(residuals.size(), regularized_points, half_width),
                          false);
}

double ScenarioResult::max_residual_inside(std::size_t half_width) const {
    return max_abs_masked(residuals,
                          regularized_window_mask(residuals.size(), regularized_points, half_width),
                          true);
}

SectorTrajectory propagate_sector(const CouplingProfile& coupling, int n, const TimeGrid& grid,
                                  const IntegratorOptions& options) {
    if (n < 0) throw DomainError("sector photon number must be nonnegative");
    if (coupling.params().detuning != 0.0) {
        throw DomainError("sector propagation is defined at resonance only (detuning must be 0)");
    }
    const double scale = std::sqrt(static_cast<double>(n) + 1.0);

    // y = (Re C_e, Im C_e, Re C_g, Im C_g); dC_e/dt = -i g C_g, dC_g/dt = -i g C_e
    using Solver = DormandPrince45<4>;
    auto rhs = [&](double t, const Solver::State& y, Solver::State& dy) {
        const double g = coupling(t) * scale;
        dy[0] = g * y[3];
        dy[1] = -g * y[2];
        dy[2] = g * y[1];
        dy[3] = -g * y[0];
    };

    SectorTrajectory out{n, grid, std::vector<SectorState>(grid.size()),
                         std::vector<double>(grid.size()), {}};
    const std::vector<double> times = grid.times();
    auto record = [&](std::size_t k, const Solver::State& y) {
        SectorState& s = out.states[k];
        s.n = n;
        s.c_e = {y[0], y[1]};
        s.c_g = {y[2], y[3]};
        out.inversion[k] = s.inversion();
    };

    // Restart the integrator at every sign flip so that no step straddles a jump.
    std::vector<double> breaks = sign_changes(coupling, times);
    breaks.push_back(times.back());
    const Solver solver(options);
    Solver::State y{1.0, 0.0, 0.0, 0.0};
    double t0 = times.front();
    std::size_t next = 0;
    std::vector<double> outputs;
    for (double t1 : breaks) {
        if (!(t1 > t0)) continue;
        const std::size_t first = next;
        outputs.clear();
        while (next < times.size() && times[next] <= t1) outputs.push_back(times[next++]);
        const bool break_is_node = !outputs.empty() && outputs.back() == t1;
        if (!break_is_node) outputs.push_back(t1);
        const IntegratorStats stats =
            solver.integrate(rhs, t0, y, outputs, [&](std::size_t k, const Solver::State& ys) {
                if (first + k < next) record(first + k, ys);
                if (k + 1 == outputs.size()) y = ys;
            });
        out.stats.accepted += stats.accepted;
        out.stats.rejected += stats.rejected;
        out.stats.rhs_calls += stats.rhs_calls;
        t0 = t1;
    }
    return out;
}

namespace {

// Bisection on top of the fixed 15-point Kronrod rule; the error estimate is scaled to
// the subinterval so that jumps and endpoint singularities are isolated cheaply.
template <class F>
double adaptive_kronrod(const F& f, double a, double b, int depth) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    const double value = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    err *= 0.5 * (b - a);
    if (depth == 0 || err <= std::max(1e-13 * (b - a), 1e-17)) return value;
    const double mid = 0.5 * (a + b);
    return adaptive_kronrod(f, a, mid, depth - 1) + adaptive_kronrod(f, mid, b, depth - 1);
}

// Splitting at a sign change keeps the jump off the quadrature nodes, which could
// otherwise straddle it undetected.
template <class F>
double signed_segments_integral(const F& f, double a, double b) {
    const double fa = f(a);
    if (!(fa * f(b) < 0.0)) return adaptive_kronrod(f, a, b, 60);
    const double c = locate_sign_change(f, a, b, fa);
    return adaptive_kronrod(f, a, c, 60) + adaptive_kronrod(f, c, b, 60);
}

}  // namespace

std::vector<double> phase_integral_oracle(const CouplingProfile& coupling, int n,
                                          const TimeGrid& grid) {
    const double scale = 2.0 * std::sqrt(static_cast<double>(n) + 1.0);
    auto f = [&](double t) { return coupling(t); };
    std::vector<double> w(grid.size());
    double phase = 0.0;
    w[0] = 1.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        phase += signed_segments_integral(f, grid[i - 1], grid[i]);
        w[i] = std::cos(scale * phase);
    }
    return w;
}

namespace {

struct SectorOutcome {
    std::vector<double> inversion;
    std::vector<std::size_t> regularized_points;
    double norm_drift = 0.0;
};

}  // namespace

ScenarioResult run_sector_pipeline(const SectorTargetFamily& targets,
                                   const SectorCouplingFamily& couplings,
                                   const PhotonStatistics& stats, const TimeGrid& grid,
                                   double tail_tol, const PropagationOptions& options) {
    const std::vector<double> weights = truncated_weights(stats, tail_tol);
    std::vector<int> sectors;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        if (weights[n] > 0.0) sectors.push_back(static_cast<int>(n));
    }
    const int representative = static_cast<int>(
        std::max_element(weights.begin(), weights.end()) - weights.begin());

    std::vector<SectorOutcome> outcomes(weights.size());
    std::vector<double> representative_coupling;
    std::vector<std::exception_ptr> errors(weights.size());
    std::atomic<std::size_t> cursor{0};

    auto work = [&] {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= sectors.size()) return;
            const int n = sectors[k];
            try {
                const CouplingProfile lambda = couplings(n);
                SectorTrajectory traj = propagate_sector(lambda, n, grid, options.integrator);
                SectorOutcome& o = outcomes[static_cast<std::size_t>(n)];
                o.norm_drift = traj.max_norm_drift();
                o.inversion = std::move(traj.inversion);
                if (const auto* s = lambda.synthesized()) o.regularized_points = s->regularized_points;
                if (n == representative) representative_coupling = lambda.sample(grid);
            } catch (...) {
                errors[static_cast<std::size_t>(n)] = std::current_exception();
            }
        }
    };

    unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(sectors.size())));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    }

    for (std::size_t n = 0; n < errors.size(); ++n) {
        if (!errors[n]) continue;
        try {
            std::rethrow_exception(errors[n]);
        } catch (const IntegrationError& e) {
            std::ostringstream os;
            os << "sector " << n << ": " << e.what();
            throw IntegrationError(os.str(), e.time());
        } catch (const DomainError& e) {
            std::ostringstream os;
            os << "sector " << n << ": " << e.what();
            throw DomainError(os.str());
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "sector " << n << ": " << e.what();
            throw Error(os.str());
        }
    }

    ScenarioResult result{grid, std::vector<double>(grid.size(), 0.0), representative_coupling,
                          std::vector<double>(grid.size(), 0.0), {}, {}, representative,
                          sectors.size(), 0.0};
    std::set<std::size_t> regularized;
    // fixed sector order keeps the reduction bit-reproducible
    for (int n : sectors) {
        const double p = weights[static_cast<std::size_t>(n)];
        const SectorOutcome& o = outcomes[static_cast<std::size_t>(n)];
        const InversionTarget target = targets(n);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            result.reproduced_w[i] += p * o.inversion[i];
            result.target_w[i] += p * target.eval(grid[i]);
        }
        regularized.insert(o.regularized_points.begin(), o.regularized_points.end());
        result.max_norm_drift = std::max(result.max_norm_drift, o.norm_drift);
    }
    result.regularized_points.assign(regularized.begin(), regularized.end());
    result.residuals = delta_w(result.reproduced_w, result.target_w);
    return result;
}

ScenarioResult run_gipa_pipeline(const SectorTargetFamily& targets, const PhotonStatistics& stats,
                                 const PhysicalParams& params, const TimeGrid& grid,
                                 double tail_tol, double eta, const PropagationOptions& options) {
    if (params.detuning != 0.0) {
        throw DomainError("the synthesis pipeline is defined at resonance only");
    }
    auto couplings = [&](int n) { return gipa(targets(n), n, grid, eta); };
    return run_sector_pipeline(targets, couplings, stats, grid, tail_tol, options);
}

ScenarioResult run_single_sector(const InversionTarget& target, int n, const TimeGrid& grid,
                                 double eta, const IntegratorOptions& options) {
    const CouplingProfile lambda = gipa(target, n, grid, eta);
    const SectorTrajectory traj = propagate_sector(lambda, n, grid, options);
    ScenarioResult r{grid, target.sample(grid), lambda.sample(grid), traj.inversion, {},
                     lambda.synthesized()->regularized_points, n, 1, traj.max_norm_drift()};
    r.residuals = delta_w(r.reproduced_w, r.target_w);
    return r;
}

std::vector<double> delta_w(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "inversion series lengths differ (" << a.size() << " vs " << b.size() << ")";
        throw DomainError(os.str());
    }
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

}  // namespace jcipa
