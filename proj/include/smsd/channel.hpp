#pragma once

#include <cmath>

#include "smsd/linalg.hpp"
#include "smsd/modem.hpp"
#include "smsd/rng.hpp"

namespace smsd {

// Frequency-flat Rayleigh fading: i.i.d. CN(0,1) entries, so each real
// dimension carries variance 1/2.
inline ComplexMatrix draw_channel(int nr, int nt, RngStream& rng) {
    ComplexMatrix h(nr, nt);
    const double s = std::sqrt(0.5);
    for (int r = 0; r < nr; ++r)
        for (int c = 0; c < nt; ++c) h.at(r, c) = cxd(s * rng.gaussian(), s * rng.gaussian());
    return h;
}

// AWGN with total complex variance sigma_n2 per receive antenna
// (sigma_n2/2 per real dimension), so SNR = 1/sigma_n2 at unit Es.
inline cvec draw_noise(int nr, double sigma_n2, RngStream& rng) {
    cvec n(nr);
    const double s = std::sqrt(0.5 * sigma_n2);
    for (int r = 0; r < nr; ++r) n[r] = cxd(s * rng.gaussian(), s * rng.gaussian());
    return n;
}

// Noiseless forward model H x; SM transmissions use the active column only.
inline cvec propagate(const ComplexMatrix& h, const TxVector& x, const Constellation& c) {
    if (h.cols != x.nt) throw ShapeMismatch("propagate: channel/transmission mismatch");
    cvec y(h.rows, cxd(0.0, 0.0));
    if (x.scheme == Scheme::SM) {
        const cxd s = c.points[x.symbols[0]];
        for (int r = 0; r < h.rows; ++r) y[r] = h.at(r, x.antenna) * s;
        return y;
    }
    const cvec xd = dense(x, c);
    for (int r = 0; r < h.rows; ++r) {
        cxd s(0.0, 0.0);
        for (int a = 0; a < h.cols; ++a) s += h.at(r, a) * xd[a];
        y[r] = s;
    }
    return y;
}

inline cvec transmit(const ComplexMatrix& h, const TxVector& x, const Constellation& c,
                     double sigma_n2, RngStream& rng) {
    cvec y = propagate(h, x, c);
    const cvec n = draw_noise(h.rows, sigma_n2, rng);
    for (int r = 0; r < h.rows; ++r) y[r] += n[r];
    return y;
}

}  // namespace smsd
