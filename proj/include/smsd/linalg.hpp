#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "smsd/errors.hpp"

namespace smsd {

using cxd = std::complex<double>;
using cvec = std::vector<cxd>;
using rvec = std::vector<double>;

struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    cvec a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    cxd& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const cxd& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

struct RealMatrix {
    int rows = 0;
    int cols = 0;
    rvec a;

    RealMatrix() = default;
    RealMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const double& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// Count of real multiplications and divisions spent inside one detection
// trial. Additions, comparisons and square roots are free in this cost model.
// One counter per trial; never shared across concurrent trials.
struct OpCounter {
    long long real_mult_div = 0;

    void add(long long n) { real_mult_div += n; }
    void reset() { real_mult_div = 0; }
};

// [Re{H} -Im{H}; Im{H} Re{H}] block expansion. This orientation satisfies
// real_expand_matrix(H) * real_expand_vector(x) == real_expand_vector(H*x)
// and therefore preserves Euclidean distances between the complex and the
// real-valued models.
inline RealMatrix real_expand_matrix(const ComplexMatrix& h) {
    RealMatrix out(2 * h.rows, 2 * h.cols);
    for (int r = 0; r < h.rows; ++r) {
        for (int c = 0; c < h.cols; ++c) {
            const cxd v = h.at(r, c);
            out.at(r, c) = v.real();
            out.at(r, c + h.cols) = -v.imag();
            out.at(r + h.rows, c) = v.imag();
            out.at(r + h.rows, c + h.cols) = v.real();
        }
    }
    return out;
}

// Stacks all real parts, then all imaginary parts.
inline rvec real_expand_vector(const cvec& v) {
    const std::size_t n = v.size();
    rvec out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = v[i].real();
        out[i + n] = v[i].imag();
    }
    return out;
}

inline cvec complex_contract_vector(const rvec& v) {
    if (v.size() % 2 != 0) throw ShapeMismatch("complex_contract_vector: odd length");
    const std::size_t n = v.size() / 2;
    cvec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = cxd(v[i], v[i + n]);
    return out;
}

// Upper-triangular factor D of a symmetric positive definite G = D^T D.
// Throws NotPositiveDefinite as soon as a pivot is non-positive.
inline RealMatrix cholesky_upper(const RealMatrix& g) {
    if (g.rows != g.cols) throw ShapeMismatch("cholesky_upper: matrix not square");
    const int n = g.rows;
    RealMatrix d(n, n);
    for (int i = 0; i < n; ++i) {
        double s = g.at(i, i);
        for (int k = 0; k < i; ++k) s -= d.at(k, i) * d.at(k, i);
        if (!(s > 0.0) || !std::isfinite(s))
            throw NotPositiveDefinite("cholesky_upper: non-positive pivot");
        const double dii = std::sqrt(s);
        d.at(i, i) = dii;
        for (int j = i + 1; j < n; ++j) {
            double t = g.at(i, j);
            for (int k = 0; k < i; ++k) t -= d.at(k, i) * d.at(k, j);
            d.at(i, j) = t / dii;
        }
    }
    return d;
}

// Back substitution for d x = b with d upper triangular.
inline rvec solve_upper(const RealMatrix& d, const rvec& b) {
    const int n = d.rows;
    rvec x(b);
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= d.at(i, j) * x[j];
        x[i] = s / d.at(i, i);
    }
    return x;
}

// Forward substitution for d^T x = b with d upper triangular.
inline rvec solve_upper_transposed(const RealMatrix& d, const rvec& b) {
    const int n = d.rows;
    rvec x(b);
    for (int i = 0; i < n; ++i) {
        double s = x[i];
        for (int j = 0; j < i; ++j) s -= d.at(j, i) * x[j];
        x[i] = s / d.at(i, i);
    }
    return x;
}

inline rvec mat_vec(const RealMatrix& m, const rvec& v) {
    if (static_cast<std::size_t>(m.cols) != v.size())
        throw ShapeMismatch("mat_vec: dimension mismatch");
    rvec out(m.rows, 0.0);
    for (int r = 0; r < m.rows; ++r) {
        double s = 0.0;
        for (int c = 0; c < m.cols; ++c) s += m.at(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

// Diagonal loading applied to the Gram matrix when the system is
// under-determined; keeps the factorization positive definite.
inline double regularizer_phi(int nt, int nr, double sigma_n2) {
    return nt > nr ? sigma_n2 : 0.0;
}

// Real-valued decomposition bundle shared by the transmit-centric decoders:
//   h_bar (2Nr x 2Nt), g_bar = h_bar^T h_bar + phi*I = d_bar^T d_bar,
//   rho_bar = g_bar^{-1} h_bar^T y_bar, z_bar = d_bar rho_bar.
struct RealModel {
    RealMatrix h_bar;
    RealMatrix g_bar;
    RealMatrix d_bar;
    rvec rho_bar;
    rvec z_bar;
    double phi = 0.0;
    int nt = 0;
    int nr = 0;
};

inline RealModel build_real_model(const ComplexMatrix& h, const cvec& y, double sigma_n2,
                                  int nt, int nr) {
    if (h.rows != nr || h.cols != nt || static_cast<int>(y.size()) != nr)
        throw ShapeMismatch("build_real_model: shape mismatch");
    if (!(sigma_n2 > 0.0)) throw DomainError("build_real_model: sigma_n2 must be > 0");

    RealModel md;
    md.nt = nt;
    md.nr = nr;
    md.phi = regularizer_phi(nt, nr, sigma_n2);
    md.h_bar = real_expand_matrix(h);

    const int n = 2 * nt;
    md.g_bar = RealMatrix(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int r = 0; r < 2 * nr; ++r) s += md.h_bar.at(r, i) * md.h_bar.at(r, j);
            if (i == j) s += md.phi;
            md.g_bar.at(i, j) = s;
            md.g_bar.at(j, i) = s;
        }
    }
    md.d_bar = cholesky_upper(md.g_bar);

    const rvec y_bar = real_expand_vector(y);
    rvec hty(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int r = 0; r < 2 * nr; ++r) s += md.h_bar.at(r, i) * y_bar[r];
        hty[i] = s;
    }
    md.rho_bar = solve_upper(md.d_bar, solve_upper_transposed(md.d_bar, hty));
    md.z_bar = mat_vec(md.d_bar, md.rho_bar);
    return md;
}

}  // namespace smsd
