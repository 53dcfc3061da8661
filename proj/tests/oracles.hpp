#pragma once

// Test-only reference implementations. These stay deliberately naive and
// independent of the library code paths they are used to check.

#include <cmath>
#include <functional>
#include <vector>

#include "smsd/detectors.hpp"
#include "smsd/linalg.hpp"
#include "smsd/modem.hpp"

namespace oracles {

// squared distance ||y - H x||^2 through the dense complex forward model
inline double dense_metric(const smsd::cvec& y, const smsd::ComplexMatrix& h,
                           const smsd::TxVector& x, const smsd::Constellation& c) {
    const smsd::cvec xd = smsd::dense(x, c);
    double sum = 0.0;
    for (int r = 0; r < h.rows; ++r) {
        smsd::cxd s(0.0, 0.0);
        for (int a = 0; a < h.cols; ++a) s += h.at(r, a) * xd[a];
        sum += std::norm(y[r] - s);
    }
    return sum;
}

// exhaustive argmin over all single-antenna points
inline smsd::TxVector brute_sm_argmin(const smsd::cvec& y, const smsd::ComplexMatrix& h,
                                      const smsd::Constellation& c, int nt) {
    double best = 1e300;
    smsd::TxVector arg;
    for (int a = 0; a < nt; ++a) {
        for (int s = 0; s < c.order; ++s) {
            smsd::TxVector x{smsd::Scheme::SM, nt, a, {s}};
            const double d = dense_metric(y, h, x, c);
            if (d < best) {
                best = d;
                arg = x;
            }
        }
    }
    return arg;
}

// triangular-model metric ||z - D xbar||^2 via a full matrix-vector product
inline double triangular_metric(const smsd::RealModel& md, const smsd::TxVector& x,
                                const smsd::Constellation& c) {
    const smsd::rvec xb = smsd::real_expand_vector(smsd::dense(x, c));
    const smsd::rvec dx = smsd::mat_vec(md.d_bar, xb);
    double sum = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        const double e = md.z_bar[i] - dx[i];
        sum += e * e;
    }
    return sum;
}

// every (antenna, label) whose triangular metric fits inside r2
inline std::vector<std::pair<int, int>> brute_sphere_set(const smsd::RealModel& md,
                                                         const smsd::Constellation& c, int nt,
                                                         double r2) {
    std::vector<std::pair<int, int>> inside;
    for (int a = 0; a < nt; ++a)
        for (int s = 0; s < c.order; ++s)
            if (triangular_metric(md, smsd::TxVector{smsd::Scheme::SM, nt, a, {s}}, c) <= r2)
                inside.emplace_back(a, s);
    return inside;
}

// adaptive Simpson quadrature
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, fm, flm, 0.5 * eps, depth - 1) +
           simpson(f, m, b, fm, fb, frm, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-13) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(b), f(m), eps, 48);
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace oracles
