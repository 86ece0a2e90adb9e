#pragma once

#include "jcipa/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>

namespace jcipa {

struct IntegratorOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    /// Step-size underflow threshold as a fraction of the integration span.
    double min_step_fraction = 1e-14;
    std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

/// Dormand-Prince 5(4) embedded Runge-Kutta pair with the fourth-order
/// continuous extension of Hairer, Norsett and Wanner (DOPRI5).
///
/// `rhs(t, y, dydt)` fills dydt. `observe(k, y)` is called once per output
/// time, in order, with the dense-output state at `outputs[k]`. The outputs
/// must be nondecreasing and lie in [t0, outputs.back()].
template <std::size_t N>
class DormandPrince45 {
public:
    using State = std::array<double, N>;

    explicit DormandPrince45(IntegratorOptions options = {}) : opt_(options) {}

    template <typename Rhs, typename Observe>
    IntegratorStats integrate(Rhs&& rhs, double t0, State y, std::span<const double> outputs,
                              Observe&& observe) const {
        IntegratorStats stats;
        if (outputs.empty()) return stats;
        const double t_end = outputs.back();
        const double span = t_end - t0;
        std::size_t next = 0;
        while (next < outputs.size() && outputs[next] <= t0) observe(next++, y);
        if (next == outputs.size()) return stats;

        State k1, k2, k3, k4, k5, k6, k7, y1, ytmp, err;
        rhs(t0, y, k1);
        ++stats.rhs_calls;
        double h = initial_step(rhs, t0, y, k1, span, stats);
        double t = t0;
        const double h_min = opt_.min_step_fraction * span;

        while (next < outputs.size()) {
            if (stats.accepted + stats.rejected >= opt_.max_steps) {
                throw IntegrationError(describe("step budget exhausted", t), t);
            }
            bool last = false;
            if (t + h >= t_end || t + 1.01 * h >= t_end) {
                h = t_end - t;
                last = true;
            }
            if (h < h_min && !last) {
                throw IntegrationError(describe("step size underflow", t), t);
            }

            for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
            rhs(t + c2 * h, ytmp, k2);
            for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            rhs(t + c3 * h, ytmp, k3);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            rhs(t + c4 * h, ytmp, k4);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            rhs(t + c5 * h, ytmp, k5);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                      a65 * k5[i]);
            const double t_new = last ? t_end : t + h;
            rhs(t_new, ytmp, k6);
            for (std::size_t i = 0; i < N; ++i)
                y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                    a76 * k6[i]);
            rhs(t_new, y1, k7);
            stats.rhs_calls += 6;

            double sum = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * k7[i]);
                const double sc =
                    opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
                sum += (err[i] / sc) * (err[i] / sc);
            }
            const double norm = std::sqrt(sum / static_cast<double>(N));
            if (!std::isfinite(norm)) {
                throw IntegrationError(describe("non-finite error estimate", t), t);
            }

            if (norm <= 1.0) {
                ++stats.accepted;
                // dense output coefficients
                std::array<State, 5> r;
                for (std::size_t i = 0; i < N; ++i) {
                    const double ydiff = y1[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    r[0][i] = y[i];
                    r[1][i] = ydiff;
                    r[2][i] = bspl;
                    r[3][i] = ydiff - h * k7[i] - bspl;
                    r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                   d6 * k6[i] + d7 * k7[i]);
                }
                while (next < outputs.size() && (outputs[next] <= t_new || last)) {
                    const double theta = last && outputs[next] >= t_end
                                             ? 1.0
                                             : (outputs[next] - t) / h;
                    const double theta1 = 1.0 - theta;
                    State ys;
                    for (std::size_t i = 0; i < N; ++i) {
                        ys[i] = r[0][i] +
                                theta * (r[1][i] +
                                         theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
                    }
                    if (theta == 1.0) ys = y1;
                    observe(next++, ys);
                }
                y = y1;
                k1 = k7;
                t = t_new;
                if (last) break;
                const double fac = std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
                h *= fac;
            } else {
                ++stats.rejected;
                const double fac = std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 1.0);
                h *= fac;
            }
        }
        return stats;
    }

private:
    template <typename Rhs>
    double initial_step(Rhs& rhs, double t0, const State& y0, const State& f0, double span,
                        IntegratorStats& stats) const {
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt_.abs_tol + opt_.rel_tol * std::abs(y0[i]);
            d0 += (y0[i] / sc) * (y0[i] / sc);
            d1n += (f0[i] / sc) * (f0[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1n = std::sqrt(d1n / N);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, span);
        State y1, f1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
        rhs(t0 + h0, y1, f1);
        ++stats.rhs_calls;
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt_.abs_tol + opt_.rel_tol * std::abs(y0[i]);
            d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dmax = std::max(d1n, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
        return std::min({100.0 * h0, h1, span});
    }

    static std::string describe(const char* what, double t) {
        std::ostringstream os;
        os << "integration failed: " << what << " at t = " << t;
        return os.str();
    }

    IntegratorOptions opt_;

    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                            a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

}  // namespace jcipa
