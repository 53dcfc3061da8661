#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "smsd/channel.hpp"
#include "smsd/complexity.hpp"
#include "smsd/linalg.hpp"
#include "smsd/modem.hpp"

namespace smsd {

// Squared search radius in noise-power units, R^2 = alpha * Nr * sigma_n2.
// With alpha from solve_alpha the transmitted point falls outside the sphere
// with the configured miss probability.
struct SphereRadius {
    double r2 = 0.0;
    double alpha = 0.0;
};

inline SphereRadius initial_radius(int nr, double sigma_n2, double alpha) {
    if (nr < 1 || !(sigma_n2 > 0.0) || !(alpha > 0.0))
        throw DomainError("initial_radius: need nr >= 1, sigma_n2 > 0, alpha > 0");
    return {alpha * nr * sigma_n2, alpha};
}

struct DetectionOutcome {
    TxVector estimate;
    long long ops = 0;                 // real multiplications and divisions
    long long candidates_examined = 0; // sphere points whose full metric was evaluated
    long long interval_evals = 0;      // real-part interval computations
    int restarts = 0;                  // radius-doubling fallbacks
    long long combined_dims = 0;       // receiver-centric: accumulated real dimensions
};

// Exhaustive minimum-distance detection over all Nt*M single-antenna points.
inline DetectionOutcome sm_ml(const cvec& y, const ComplexMatrix& h, const Constellation& c,
                              int nt) {
    if (h.cols != nt || static_cast<int>(y.size()) != h.rows)
        throw ShapeMismatch("sm_ml: shape mismatch");
    const int nr = h.rows;
    OpCounter ops;
    double best = std::numeric_limits<double>::infinity();
    int best_a = 0, best_s = 0;
    for (int a = 0; a < nt; ++a) {
        for (int s = 0; s < c.order; ++s) {
            const cxd p = c.points[s];
            double dist = 0.0;
            for (int r = 0; r < nr; ++r) dist += std::norm(y[r] - h.at(r, a) * p);
            ops.add(8LL * nr);
            if (dist < best) {
                best = dist;
                best_a = a;
                best_s = s;
            }
        }
    }
    DetectionOutcome out;
    out.estimate = TxVector{Scheme::SM, nt, best_a, {best_s}};
    out.ops = ops.real_mult_div;
    return out;
}

// Full SMX codebook plus the per-dimension level tables the tree search uses.
struct SmxCodebook {
    int nt = 0;
    int m = 0;
    Constellation constellation;
    std::vector<TxVector> words;        // index == bit word
    std::vector<cvec> dense_words;      // scaled dense forms
    std::vector<double> im_levels;      // distinct scaled imaginary levels, ascending
    std::vector<std::vector<double>> re_by_group;  // per im level, ascending scaled real parts
    std::vector<std::vector<int>> label_by_group;  // parallel to re_by_group
};

inline SmxCodebook build_smx_codebook(int nt, const Constellation& c) {
    SmxCodebook cb;
    cb.nt = nt;
    cb.m = spectral_efficiency(Scheme::SMX, nt, c.order);
    if (cb.m > 24) throw ConfigError("build_smx_codebook: codebook larger than 2^24");
    cb.constellation = c;
    const std::uint32_t n = 1u << cb.m;
    cb.words.reserve(n);
    cb.dense_words.reserve(n);
    for (std::uint32_t w = 0; w < n; ++w) {
        cb.words.push_back(smx_map(w, nt, c));
        cb.dense_words.push_back(dense(cb.words.back(), c));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(nt));
    for (const auto& g : c.im_groups) {
        cb.im_levels.push_back(g.im * scale);
        std::vector<double> re;
        std::vector<int> labels;
        for (int label : g.labels) {
            re.push_back(c.points[label].real() * scale);
            labels.push_back(label);
        }
        cb.re_by_group.push_back(std::move(re));
        cb.label_by_group.push_back(std::move(labels));
    }
    return cb;
}

// Exhaustive minimum-distance detection over the 2^m SMX codebook.
inline DetectionOutcome smx_ml(const cvec& y, const ComplexMatrix& h, const SmxCodebook& cb) {
    if (h.cols != cb.nt || static_cast<int>(y.size()) != h.rows)
        throw ShapeMismatch("smx_ml: shape mismatch");
    const int nr = h.rows;
    OpCounter ops;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_w = 0;
    for (std::size_t w = 0; w < cb.dense_words.size(); ++w) {
        const cvec& x = cb.dense_words[w];
        double dist = 0.0;
        for (int r = 0; r < nr; ++r) {
            cxd s(0.0, 0.0);
            for (int a = 0; a < cb.nt; ++a) s += h.at(r, a) * x[a];
            dist += std::norm(y[r] - s);
        }
        ops.add(4LL * (cb.nt + 1) * nr);
        if (dist < best) {
            best = dist;
            best_w = w;
        }
    }
    DetectionOutcome out;
    out.estimate = cb.words[best_w];
    out.ops = ops.real_mult_div;
    return out;
}

// Receiver-centric sphere decoder. Accumulates the real-dimension terms of
// each point's distance only while the partial sum stays inside the working
// radius; a point counts as a solution when all 2Nr dimensions are combined.
// The radius shrinks to each completed distance. If no point completes, the
// squared radius is quadrupled and the scan restarts.
inline DetectionOutcome sm_rx(const rvec& y_bar, const RealMatrix& h_bar, const Constellation& c,
                              int nt, SphereRadius radius) {
    const int two_nr = static_cast<int>(y_bar.size());
    if (h_bar.rows != two_nr || h_bar.cols != 2 * nt)
        throw ShapeMismatch("sm_rx: shape mismatch");
    OpCounter ops;
    DetectionOutcome out;
    double r2 = radius.r2;
    for (;;) {
        double best = std::numeric_limits<double>::infinity();
        int best_a = -1, best_s = -1;
        for (int a = 0; a < nt; ++a) {
            for (int s = 0; s < c.order; ++s) {
                const double re = c.points[s].real();
                const double im = c.points[s].imag();
                double acc = 0.0;
                int n = 0;
                while (n < two_nr) {
                    const double e = y_bar[n] - h_bar.at(n, a) * re - h_bar.at(n, a + nt) * im;
                    acc += e * e;
                    ops.add(3);
                    ++n;
                    if (acc > r2) break;
                }
                out.combined_dims += n;
                if (n == two_nr && acc <= r2) {
                    if (acc < best) {
                        best = acc;
                        best_a = a;
                        best_s = s;
                    }
                    r2 = best;
                }
            }
        }
        if (best_a >= 0) {
            out.estimate = TxVector{Scheme::SM, nt, best_a, {best_s}};
            break;
        }
        r2 *= 4.0;
        if (++out.restarts > 200) throw NoConvergence("sm_rx: radius fallback did not terminate");
    }
    out.ops = ops.real_mult_div;
    return out;
}

struct SphereCandidate {
    int antenna = 0;
    int label = 0;
    double metric = 0.0;
};

struct SphereEnumeration {
    std::vector<SphereCandidate> inside;  // emission order, metric <= running radius
    long long examined = 0;               // full metric evaluations
    long long interval_evals = 0;         // real-part interval computations
    double final_r2 = 0.0;
};

struct SphereOptions {
    bool shrink_radius = true;
};

// Enumerates the single-antenna points inside the sphere around z_bar using
// the per-antenna interval tests on the triangular model. The imaginary-part
// interval is solved per antenna; the real-part interval is evaluated once
// per distinct (antenna, imaginary level) surviving it, with levels visited
// closest-to-center first. Every emitted candidate shrinks the working
// radius to its own metric unless shrinking is disabled, and the interval
// tests always apply the current radius: the interval centers do not depend
// on the radius, so in closest-first order the first level outside the
// working interval ends its loop.
inline SphereEnumeration enumerate_candidates(const RealModel& md, const Constellation& c, int nt,
                                              double radius2, const SphereOptions& opt = {}) {
    SphereEnumeration res;
    const RealMatrix& d = md.d_bar;
    const rvec& z = md.z_bar;
    double r2 = radius2;
    const int n_groups = static_cast<int>(c.im_groups.size());
    std::vector<int> group_order(n_groups);
    std::vector<int> label_order;

    for (int a = 0; a < nt; ++a) {
        const int row_im = a + nt;
        const double dii = d.at(row_im, row_im);
        const double im_center = z[row_im] / dii;

        for (int g = 0; g < n_groups; ++g) group_order[g] = g;
        std::sort(group_order.begin(), group_order.end(), [&](int ga, int gb) {
            return std::abs(c.im_groups[ga].im - im_center) <
                   std::abs(c.im_groups[gb].im - im_center);
        });

        for (int gi = 0; gi < n_groups; ++gi) {
            const Constellation::ImGroup& grp = c.im_groups[group_order[gi]];
            const double vim = grp.im;
            const double im_term = z[row_im] - dii * vim;
            if (im_term * im_term > r2) break;  // levels only get farther from the center
            ++res.interval_evals;

            double bottom = 0.0;
            for (int v = nt; v < 2 * nt; ++v) {
                const double e = z[v] - d.at(v, row_im) * vim;
                bottom += e * e;
            }
            if (bottom > r2) continue;  // no real part can fit this level

            const double z_cond = z[a] - d.at(a, row_im) * vim;
            const double daa = d.at(a, a);
            const double re_center = z_cond / daa;

            label_order.assign(grp.labels.begin(), grp.labels.end());
            std::sort(label_order.begin(), label_order.end(), [&](int la, int lb) {
                return std::abs(c.points[la].real() - re_center) <
                       std::abs(c.points[lb].real() - re_center);
            });

            for (int label : label_order) {
                const double vre = c.points[label].real();
                const double re_term = z_cond - daa * vre;
                if (bottom + re_term * re_term > r2) break;  // farther values cannot fit
                double top = 0.0;
                for (int v = 0; v < nt; ++v) {
                    const double e = z[v] - d.at(v, a) * vre - d.at(v, row_im) * vim;
                    top += e * e;
                }
                const double metric = bottom + top;
                ++res.examined;
                if (metric <= r2) {
                    res.inside.push_back({a, label, metric});
                    if (opt.shrink_radius) r2 = metric;
                }
            }
        }
    }
    res.final_r2 = r2;
    return res;
}

// Transmit-centric sphere decoder: builds the triangular real-valued model
// and returns the metric minimizer over the enumerated candidate set. An
// empty sphere quadruples the squared radius and restarts.
inline DetectionOutcome sm_tx(const cvec& y, const ComplexMatrix& h, const Constellation& c,
                              int nt, int nr, double sigma_n2, SphereRadius radius) {
    const RealModel md = build_real_model(h, y, sigma_n2, nt, nr);
    OpCounter ops;
    ops.add(c_tx_precomp(nt, nr));
    DetectionOutcome out;
    double r2 = radius.r2;
    for (;;) {
        const SphereEnumeration en = enumerate_candidates(md, c, nt, r2);
        ops.add(c_tx_interval(nt, en.interval_evals));
        ops.add(3LL * nt * en.examined);
        out.candidates_examined += en.examined;
        out.interval_evals += en.interval_evals;
        if (!en.inside.empty()) {
            const SphereCandidate* best = &en.inside.front();
            for (const auto& cand : en.inside)
                if (cand.metric < best->metric) best = &cand;
            out.estimate = TxVector{Scheme::SM, nt, best->antenna, {best->label}};
            break;
        }
        r2 *= 4.0;
        if (++out.restarts > 200) throw NoConvergence("sm_tx: radius fallback did not terminate");
    }
    out.ops = ops.real_mult_div;
    return out;
}

namespace detail {

// Depth-first Schnorr-Euchner search over the triangular SMX model. Levels
// run from the last imaginary dimension down to the first real one, so each
// antenna's imaginary level is fixed before its real level; the real-part
// alphabet is conditioned on that level, which keeps cross constellations
// exact. Each node expansion recomputes its level interval from the running
// budget and is charged the 2Nt+3 interval coefficient; every tried level
// value costs 3 ops.
struct SmxTreeSearch {
    const RealModel& md;
    const SmxCodebook& cb;
    OpCounter& ops;
    double r2;
    long long leaves = 0;
    long long expansions = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> group_choice;   // per antenna
    std::vector<int> re_choice;      // per antenna
    std::vector<int> best_labels;
    std::vector<double> x_bar;
    std::vector<std::vector<int>> level_order;  // per-level scratch

    SmxTreeSearch(const RealModel& model, const SmxCodebook& codebook, OpCounter& counter,
                  double radius2)
        : md(model), cb(codebook), ops(counter), r2(radius2),
          group_choice(codebook.nt, 0), re_choice(codebook.nt, 0),
          x_bar(2 * codebook.nt, 0.0), level_order(2 * codebook.nt) {}

    void descend(int idx, double acc) {
        const int nt = cb.nt;
        const RealMatrix& d = md.d_bar;
        ++expansions;
        ops.add(2LL * nt + 3);
        double inner = 0.0;
        for (int j = idx + 1; j < 2 * nt; ++j) inner += d.at(idx, j) * x_bar[j];
        const double resid = md.z_bar[idx] - inner;
        const double dii = d.at(idx, idx);
        const double center = resid / dii;

        const bool im_dim = idx >= nt;
        const int antenna = im_dim ? idx - nt : idx;
        const std::vector<double>& values =
            im_dim ? cb.im_levels : cb.re_by_group[group_choice[antenna]];

        std::vector<int>& order = level_order[idx];
        order.resize(values.size());
        for (std::size_t k = 0; k < values.size(); ++k) order[k] = static_cast<int>(k);
        std::sort(order.begin(), order.end(), [&](int ka, int kb) {
            return std::abs(values[ka] - center) < std::abs(values[kb] - center);
        });

        for (int k : order) {
            const double v = values[k];
            const double e = resid - dii * v;
            const double pd = acc + e * e;
            ops.add(3);
            if (pd > r2) break;  // remaining values are farther from the center
            x_bar[idx] = v;
            if (im_dim) {
                group_choice[antenna] = k;
                descend(idx - 1, pd);
            } else if (idx > 0) {
                re_choice[antenna] = k;
                descend(idx - 1, pd);
            } else {
                re_choice[antenna] = k;
                ++leaves;
                if (pd < best) {
                    best = pd;
                    best_labels.resize(nt);
                    for (int a = 0; a < nt; ++a)
                        best_labels[a] = cb.label_by_group[group_choice[a]][re_choice[a]];
                }
                r2 = pd;
            }
        }
    }
};

}  // namespace detail

// Sphere decoder for SMX on the same triangular real-valued model.
inline DetectionOutcome smx_sd(const cvec& y, const ComplexMatrix& h, const SmxCodebook& cb,
                               int nt, int nr, double sigma_n2, SphereRadius radius) {
    if (nt != cb.nt) throw ShapeMismatch("smx_sd: codebook/antenna mismatch");
    const RealModel md = build_real_model(h, y, sigma_n2, nt, nr);
    OpCounter ops;
    ops.add(c_tx_precomp(nt, nr));
    DetectionOutcome out;
    double r2 = radius.r2;
    for (;;) {
        detail::SmxTreeSearch search(md, cb, ops, r2);
        search.descend(2 * nt - 1, 0.0);
        out.candidates_examined += search.leaves;
        out.interval_evals += search.expansions;
        if (!search.best_labels.empty()) {
            TxVector x;
            x.scheme = Scheme::SMX;
            x.nt = nt;
            x.symbols = search.best_labels;
            out.estimate = x;
            break;
        }
        r2 *= 4.0;
        if (++out.restarts > 200) throw NoConvergence("smx_sd: radius fallback did not terminate");
    }
    out.ops = ops.real_mult_div;
    return out;
}

}  // namespace smsd
