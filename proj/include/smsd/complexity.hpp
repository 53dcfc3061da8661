#pragma once

#include <string>

#include "smsd/errors.hpp"

namespace smsd {

// Closed-form operation counts (real multiplications and divisions). The
// runtime counters in the detectors charge exactly these coefficients, so
// the ML counts reconcile as equalities and the sphere-decoder counts as
// per-trial bounds.

// Exhaustive SM detection: 8 ops per (antenna, symbol, receive-antenna) term.
inline long long c_sm_ml(int m, int nr) { return 8LL * nr * (1LL << m); }

// Exhaustive SMX detection: (Nt+1) complex multiplications per candidate and
// receive antenna, 4 real ops each.
inline long long c_smx_ml(int m, int nt, int nr) {
    return 4LL * (nt + 1) * nr * (1LL << m);
}

// Percentage saved by SM-ML relative to SMX-ML at equal spectral efficiency.
inline double relative_ml_reduction(int nt) { return 100.0 * (1.0 - 2.0 / (nt + 1)); }

// Receiver-centric decoder: 3 ops per combined real dimension.
inline long long c_rx_from_counts(long long ntilde_sum) { return 3LL * ntilde_sum; }

inline long long c_rx_from_counts(long long ntilde_sum, int m, int nr) {
    const long long ops = c_rx_from_counts(ntilde_sum);
    if (ops < 3LL * (1LL << m) || ops > 6LL * nr * (1LL << m))
        throw RangeViolation("c_rx_from_counts: count outside [3*2^m, 6*Nr*2^m]");
    return ops;
}

// Upper-triangular Cholesky factor of the 2Nt x 2Nt Gram matrix, 4Nt^3/3
// rounded up to the next integer.
inline long long c_cholesky(int nt) {
    const long long n = nt;
    return (4 * n * n * n + 2) / 3;
}

// Factorization plus the Gram matrix, the back-substituted receive point and
// its triangular image.
inline long long c_tx_precomp(int nt, int nr) {
    return c_cholesky(nt) + static_cast<long long>(nt) * (4LL * nr * nt + 6LL * nr + 6LL * nt + 3);
}

// Interval search: two divisions per antenna for the imaginary-part bounds,
// then 2Nt+3 ops per distinct (antenna, imaginary level) whose real-part
// interval is evaluated.
inline long long c_tx_interval(int nt, long long re_interval_evals) {
    return 2LL * nt + (2LL * nt + 3) * re_interval_evals;
}

// Transmit-centric decoder bound: candidate-set search plus 3Nt ops per
// candidate whose full metric is evaluated.
inline long long c_tx_bound(int nt, int nr, long long card_theta, long long re_interval_evals) {
    return c_tx_precomp(nt, nr) + c_tx_interval(nt, re_interval_evals) + 3LL * nt * card_theta;
}

struct ComplexityReport {
    std::string detector;
    long long formula_value = 0;  // closed form where one exists, else 0
    double counted_mean = 0.0;
    double rel_pct = 0.0;  // 100 * counted / c_sm_ml at equal (m, Nr)
};

}  // namespace smsd
