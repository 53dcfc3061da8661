#pragma once

#include <cmath>
#include <vector>

#include "smsd/errors.hpp"
#include "smsd/modem.hpp"

namespace smsd {

// P(a, x) = lower_gamma(a, x) / Gamma(a). Series for x < a+1, Lentz
// continued fraction otherwise; both iterated to ~1e-15 relative.
inline double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        throw DomainError("regularized_lower_gamma: need a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    const double lga = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double term = 1.0 / a;
        double sum = term;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lga);
    }
    // continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lga) * f;
    return 1.0 - q;
}

// Probability that a noise vector of total per-antenna variance sigma_n2
// lands outside the squared radius r2; chi-square tail with 2*nr degrees of
// freedom evaluated at r2/sigma_n2.
inline double pr_outside_sphere(double r2, double sigma_n2, int nr) {
    if (!(r2 > 0.0) || !(sigma_n2 > 0.0) || nr < 1)
        throw DomainError("pr_outside_sphere: need positive r2, sigma_n2 and nr >= 1");
    return 1.0 - regularized_lower_gamma(nr, r2 / sigma_n2);
}

// Radius constant alpha such that the transmitted point is missed with the
// target probability: solves P(nr, t) = 1 - target_miss by bisection and
// returns t / nr.
inline double solve_alpha(int nr, double target_miss = 1e-6) {
    if (nr < 1 || !(target_miss > 0.0) || !(target_miss < 1.0))
        throw DomainError("solve_alpha: need nr >= 1 and target in (0,1)");
    const double goal = 1.0 - target_miss;
    double lo = 0.0;
    double hi = 4.0 * nr + 16.0;
    int guard = 0;
    while (regularized_lower_gamma(nr, hi) < goal) {
        hi *= 2.0;
        if (++guard > 200) throw NoConvergence("solve_alpha: bracket expansion failed");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_lower_gamma(nr, mid) < goal)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-9) break;
    }
    return 0.5 * (lo + hi) / nr;
}

inline double zeta(double c) {
    if (!(c >= 0.0)) throw DomainError("zeta: need c >= 0");
    return 0.5 * (1.0 - std::sqrt(c / (1.0 + c)));
}

// Rayleigh-averaged probability of deciding for a point at squared
// separation sigma_s2 instead of the transmitted one, with nr-fold receive
// diversity:  z^nr * sum_{r<nr} C(nr-1+r, r) (1-z)^r,  z = zeta(s/4n).
inline double pairwise_error_probability(double sigma_s2, double sigma_n2, int nr) {
    if (!(sigma_s2 >= 0.0) || !(sigma_n2 > 0.0) || nr < 1)
        throw DomainError("pairwise_error_probability: bad arguments");
    const double z = zeta(sigma_s2 / (4.0 * sigma_n2));
    double coef = 1.0;
    double pw = 1.0;
    double sum = 1.0;
    for (int r = 1; r < nr; ++r) {
        coef = coef * static_cast<double>(nr - 1 + r) / static_cast<double>(r);
        pw *= 1.0 - z;
        sum += coef * pw;
    }
    return std::pow(z, nr) * sum;
}

// One ordered pair of transmit points: squared real-model separation and the
// number of differing bits.
struct PairwiseTerm {
    double sigma_s2 = 0.0;
    int n_bits = 0;
};

struct BoundSpec {
    int nt = 1;
    int nr = 1;
    int mod_order = 2;
    std::vector<double> snr_db;
};

// All ordered pairs of the SM transmit set. Same-antenna pairs separate by
// |s_t - s|^2, cross-antenna pairs by |s_t|^2 + |s|^2.
inline std::vector<PairwiseTerm> pairwise_terms(int nt, const Constellation& c) {
    const int m = spectral_efficiency(Scheme::SM, nt, c.order);
    std::vector<PairwiseTerm> terms;
    terms.reserve(static_cast<std::size_t>(1) << (2 * m));
    for (int a1 = 0; a1 < nt; ++a1) {
        for (int s1 = 0; s1 < c.order; ++s1) {
            const std::uint32_t bits1 = sm_demap(a1, s1, nt, c);
            for (int a2 = 0; a2 < nt; ++a2) {
                for (int s2 = 0; s2 < c.order; ++s2) {
                    PairwiseTerm t;
                    t.sigma_s2 = a1 == a2 ? std::norm(c.points[s1] - c.points[s2])
                                          : std::norm(c.points[s1]) + std::norm(c.points[s2]);
                    t.n_bits = std::popcount(bits1 ^ sm_demap(a2, s2, nt, c));
                    terms.push_back(t);
                }
            }
        }
    }
    return terms;
}

// Union bound on the SM bit error ratio, one value per SNR point. Pairs with
// identical points carry zero differing bits and drop out.
inline std::vector<double> union_bound_ber(const BoundSpec& spec, const Constellation& c) {
    if (spec.mod_order != c.order) throw ShapeMismatch("union_bound_ber: constellation mismatch");
    if (spec.snr_db.empty()) throw DomainError("union_bound_ber: empty SNR list");
    const int m = spectral_efficiency(Scheme::SM, spec.nt, spec.mod_order);
    const std::vector<PairwiseTerm> terms = pairwise_terms(spec.nt, c);
    const double norm = static_cast<double>(m) * std::pow(2.0, m);
    std::vector<double> out;
    out.reserve(spec.snr_db.size());
    for (double snr : spec.snr_db) {
        const double sigma_n2 = std::pow(10.0, -snr / 10.0);
        double sum = 0.0;
        for (const auto& t : terms) {
            if (t.n_bits == 0) continue;
            sum += t.n_bits * pairwise_error_probability(t.sigma_s2, sigma_n2, spec.nr);
        }
        out.push_back(sum / norm);
    }
    return out;
}

}  // namespace smsd
