#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smsd/channel.hpp"
#include "smsd/linalg.hpp"
#include "smsd/modem.hpp"
#include "smsd/rng.hpp"

using namespace smsd;

namespace {

ComplexMatrix random_matrix(int rows, int cols, RngStream& rng) {
    ComplexMatrix h(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) h.at(r, c) = cxd(rng.gaussian(), rng.gaussian());
    return h;
}

cvec random_cvec(int n, RngStream& rng) {
    cvec v(n);
    for (auto& x : v) x = cxd(rng.gaussian(), rng.gaussian());
    return v;
}

double frob_rel_err(const RealMatrix& a, const RealMatrix& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) {
        num += (a.a[i] - b.a[i]) * (a.a[i] - b.a[i]);
        den += b.a[i] * b.a[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("real_expand_matrix: 1x1 real entry gives the 2x2 identity pattern") {
    ComplexMatrix h(1, 1);
    h.at(0, 0) = 1.0;
    const RealMatrix e = real_expand_matrix(h);
    CHECK(e.at(0, 0) == 1.0);
    CHECK(e.at(0, 1) == 0.0);
    CHECK(e.at(1, 0) == 0.0);
    CHECK(e.at(1, 1) == 1.0);
}

TEST_CASE("real_expand_matrix: pure imaginary entry fixes the off-diagonal signs") {
    // the orientation that keeps expand(H)expand(x) == expand(Hx)
    ComplexMatrix h(1, 1);
    h.at(0, 0) = cxd(0.0, 1.0);
    const RealMatrix e = real_expand_matrix(h);
    CHECK(e.at(0, 0) == 0.0);
    CHECK(e.at(0, 1) == -1.0);
    CHECK(e.at(1, 0) == 1.0);
    CHECK(e.at(1, 1) == 0.0);
}

TEST_CASE("real expansion commutes with complex multiplication") {
    RngStream rng(7, 0, 0);
    const ComplexMatrix h = random_matrix(2, 2, rng);
    const RealMatrix hb = real_expand_matrix(h);
    for (int i = 0; i < 100; ++i) {
        const cvec x = random_cvec(2, rng);
        const rvec lhs = mat_vec(hb, real_expand_vector(x));
        cvec hx(2, cxd(0, 0));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) hx[r] += h.at(r, c) * x[c];
        const rvec rhs = real_expand_vector(hx);
        for (int k = 0; k < 4; ++k) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-12));
    }
}

TEST_CASE("real expansion preserves the residual norm") {
    RngStream rng(8, 0, 0);
    for (int i = 0; i < 50; ++i) {
        const ComplexMatrix h = random_matrix(3, 2, rng);
        const cvec x = random_cvec(2, rng);
        const cvec y = random_cvec(3, rng);
        cvec res = y;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 2; ++c) res[r] -= h.at(r, c) * x[c];
        double complex_norm = 0.0;
        for (const auto& v : res) complex_norm += std::norm(v);

        const rvec rb = [&] {
            rvec out = real_expand_vector(y);
            const rvec hx = mat_vec(real_expand_matrix(h), real_expand_vector(x));
            for (std::size_t k = 0; k < out.size(); ++k) out[k] -= hx[k];
            return out;
        }();
        double real_norm = 0.0;
        for (double v : rb) real_norm += v * v;
        CHECK(real_norm == doctest::Approx(complex_norm).epsilon(1e-12));
    }
}

TEST_CASE("real_expand_vector stacking and round trip") {
    const rvec e = real_expand_vector({cxd(1.0, 2.0)});
    REQUIRE(e.size() == 2);
    CHECK(e[0] == 1.0);
    CHECK(e[1] == 2.0);

    const rvec z = real_expand_vector({cxd(0, 0), cxd(0, 0)});
    for (double v : z) CHECK(v == 0.0);

    RngStream rng(9, 0, 0);
    const cvec v = random_cvec(5, rng);
    const cvec back = complex_contract_vector(real_expand_vector(v));
    for (int i = 0; i < 5; ++i) CHECK(back[i] == v[i]);
}

TEST_CASE("cholesky_upper: identity and a worked 2x2 factor") {
    RealMatrix eye(4, 4);
    for (int i = 0; i < 4; ++i) eye.at(i, i) = 1.0;
    const RealMatrix d = cholesky_upper(eye);
    CHECK(frob_rel_err(d, eye) == doctest::Approx(0.0).epsilon(1e-15));

    RealMatrix g(2, 2);
    g.at(0, 0) = 4;
    g.at(0, 1) = 2;
    g.at(1, 0) = 2;
    g.at(1, 1) = 5;
    const RealMatrix f = cholesky_upper(g);
    CHECK(f.at(0, 0) == doctest::Approx(2.0));
    CHECK(f.at(0, 1) == doctest::Approx(1.0));
    CHECK(f.at(1, 0) == 0.0);
    CHECK(f.at(1, 1) == doctest::Approx(2.0));
    // reconstruct by direct multiplication
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int k = 0; k < 2; ++k) s += f.at(k, i) * f.at(k, j);
            CHECK(s == doctest::Approx(g.at(i, j)).epsilon(1e-14));
        }
}

TEST_CASE("cholesky_upper reconstructs random regularized Gram matrices") {
    RngStream rng(10, 0, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix h = random_matrix(3, 3, rng);
        const RealMatrix hb = real_expand_matrix(h);
        RealMatrix g(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                double s = i == j ? 0.1 : 0.0;
                for (int r = 0; r < 6; ++r) s += hb.at(r, i) * hb.at(r, j);
                g.at(i, j) = s;
            }
        const RealMatrix d = cholesky_upper(g);
        RealMatrix rec(6, 6);
        double diag_min = 1e300;
        for (int i = 0; i < 6; ++i) {
            diag_min = std::min(diag_min, d.at(i, i));
            for (int j = 0; j < 6; ++j) {
                CHECK((j >= i || d.at(i, j) == 0.0));
                double s = 0.0;
                for (int k = 0; k < 6; ++k) s += d.at(k, i) * d.at(k, j);
                rec.at(i, j) = s;
            }
        }
        CHECK(diag_min > 0.0);
        CHECK(frob_rel_err(rec, g) < 1e-10);
    }
}

TEST_CASE("cholesky_upper rejects indefinite input") {
    RealMatrix g(2, 2);
    g.at(0, 0) = 1;
    g.at(0, 1) = 2;
    g.at(1, 0) = 2;
    g.at(1, 1) = 1;
    CHECK_THROWS_AS(cholesky_upper(g), NotPositiveDefinite);
}

TEST_CASE("build_real_model: regularizer choice") {
    RngStream rng(11, 0, 0);
    {
        const ComplexMatrix h = random_matrix(4, 2, rng);
        const cvec y = random_cvec(4, rng);
        CHECK(build_real_model(h, y, 0.1, 2, 4).phi == 0.0);
    }
    {
        const ComplexMatrix h = random_matrix(2, 4, rng);
        const cvec y = random_cvec(2, rng);
        CHECK(build_real_model(h, y, 0.1, 4, 2).phi == doctest::Approx(0.1));
    }
}

TEST_CASE("build_real_model: rank-deficient channel without loading is rejected") {
    // duplicate columns and Nt <= Nr leave the Gram matrix singular
    ComplexMatrix h(2, 2);
    h.at(0, 0) = 1.0;
    h.at(0, 1) = 1.0;
    const cvec y = {cxd(1.0, 0.0), cxd(0.0, 0.0)};
    CHECK_THROWS_AS(build_real_model(h, y, 0.5, 2, 2), NotPositiveDefinite);
    // with Nt > Nr the diagonal loading keeps it factorable
    ComplexMatrix wide(1, 2);
    wide.at(0, 0) = 1.0;
    wide.at(0, 1) = 1.0;
    const cvec y1 = {cxd(1.0, 0.0)};
    CHECK(build_real_model(wide, y1, 0.5, 2, 1).phi == doctest::Approx(0.5));
}

TEST_CASE("build_real_model: identity channel maps the receive point through") {
    ComplexMatrix h(2, 2);
    h.at(0, 0) = 1.0;
    h.at(1, 1) = 1.0;
    const cvec y = {cxd(1.0, 0.0), cxd(0.0, 0.0)};
    const RealModel md = build_real_model(h, y, 0.5, 2, 2);
    const rvec expect = real_expand_vector(y);
    for (int i = 0; i < 4; ++i) CHECK(md.rho_bar[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("build_real_model invariants on random draws") {
    RngStream rng(12, 0, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const int nt = trial % 2 == 0 ? 2 : 4;
        const int nr = trial % 2 == 0 ? 4 : 2;  // covers both regularizer branches
        const ComplexMatrix h = random_matrix(nr, nt, rng);
        const cvec y = random_cvec(nr, rng);
        const double sigma_n2 = 0.3;
        const RealModel md = build_real_model(h, y, sigma_n2, nt, nr);
        const int n = 2 * nt;

        // g_bar == h_bar^T h_bar + phi I
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = i == j ? md.phi : 0.0;
                for (int r = 0; r < 2 * nr; ++r) s += md.h_bar.at(r, i) * md.h_bar.at(r, j);
                CHECK(md.g_bar.at(i, j) == doctest::Approx(s).epsilon(1e-12));
            }

        // d_bar^T d_bar == g_bar, upper triangular, positive diagonal
        RealMatrix rec(n, n);
        for (int i = 0; i < n; ++i) {
            CHECK(md.d_bar.at(i, i) > 0.0);
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += md.d_bar.at(k, i) * md.d_bar.at(k, j);
                rec.at(i, j) = s;
            }
        }
        CHECK(frob_rel_err(rec, md.g_bar) < 1e-10);

        // z_bar == d_bar rho_bar
        const rvec z = mat_vec(md.d_bar, md.rho_bar);
        for (int i = 0; i < n; ++i) CHECK(md.z_bar[i] == doctest::Approx(z[i]).epsilon(1e-10));
    }
}

TEST_CASE("triangular metric differs from the dense metric by a constant when phi = 0") {
    RngStream rng(13, 0, 0);
    const int nt = 2, nr = 2;
    const Constellation c = build_constellation(4);
    const ComplexMatrix h = random_matrix(nr, nt, rng);
    const cvec y = random_cvec(nr, rng);
    const RealModel md = build_real_model(h, y, 0.7, nt, nr);
    REQUIRE(md.phi == 0.0);

    double lo = 1e300, hi = -1e300;
    for (int a = 0; a < nt; ++a)
        for (int s = 0; s < c.order; ++s) {
            const TxVector x{Scheme::SM, nt, a, {s}};
            const double diff =
                oracles::dense_metric(y, h, x, c) - oracles::triangular_metric(md, x, c);
            lo = std::min(lo, diff);
            hi = std::max(hi, diff);
        }
    CHECK(hi - lo < 1e-9);
}
