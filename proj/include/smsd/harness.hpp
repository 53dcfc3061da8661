#pragma once

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "smsd/analysis.hpp"
#include "smsd/channel.hpp"
#include "smsd/complexity.hpp"
#include "smsd/detectors.hpp"

namespace smsd {

enum class DetectorKind { SmMl, SmRx, SmTx, SmxMl, SmxSd };

inline const char* detector_name(DetectorKind k) {
    switch (k) {
        case DetectorKind::SmMl: return "sm-ml";
        case DetectorKind::SmRx: return "sm-rx";
        case DetectorKind::SmTx: return "sm-tx";
        case DetectorKind::SmxMl: return "smx-ml";
        case DetectorKind::SmxSd: return "smx-sd";
    }
    return "?";
}

inline DetectorKind detector_from_name(const std::string& name) {
    for (DetectorKind k : {DetectorKind::SmMl, DetectorKind::SmRx, DetectorKind::SmTx,
                           DetectorKind::SmxMl, DetectorKind::SmxSd})
        if (name == detector_name(k)) return k;
    throw ConfigError("unknown detector: " + name);
}

struct SweepConfig {
    Scheme scheme = Scheme::SM;
    int nt = 4;
    int nr = 4;
    int mod_order = 16;
    std::vector<DetectorKind> detectors = {DetectorKind::SmMl};
    std::vector<double> snr_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
    long long trials = 10000;
    long long max_trials = 0;  // 0: no extension beyond `trials`
    std::uint64_t seed = 1;
    long long min_bit_errors = 200;
    int threads = 0;  // 0: hardware concurrency
    double target_miss = 1e-6;

    void validate() const {
        if (trials < 1) throw ConfigError("config: trials must be >= 1");
        if (snr_db.empty()) throw ConfigError("config: empty SNR grid");
        for (std::size_t i = 1; i < snr_db.size(); ++i)
            if (!(snr_db[i] > snr_db[i - 1]))
                throw ConfigError("config: SNR grid must be strictly increasing");
        if (detectors.empty()) throw ConfigError("config: no detectors selected");
        for (DetectorKind k : detectors) {
            const bool sm = k == DetectorKind::SmMl || k == DetectorKind::SmRx ||
                            k == DetectorKind::SmTx;
            if (sm != (scheme == Scheme::SM))
                throw ConfigError(std::string("config: detector ") + detector_name(k) +
                                  " does not match scheme " + scheme_name(scheme));
        }
        if (min_bit_errors < 0) throw ConfigError("config: min_bit_errors must be >= 0");
        if (threads < 0) throw ConfigError("config: threads must be >= 0");
    }
};

// One (detector, SNR) row. rel_pct is relative to exhaustive SM detection at
// the same spectral efficiency and receive-antenna count.
struct SweepRecord {
    std::string detector;
    double snr_db = 0.0;
    long long trials = 0;
    long long bit_errors = 0;
    double ber = 0.0;
    double mean_ops = 0.0;
    double rel_pct = 0.0;
    long long restarts = 0;
    double mean_card_theta = 0.0;
    bool censored = false;  // bit_errors below the configured target

    bool operator==(const SweepRecord&) const = default;
};

namespace detail {

struct DetectorAccum {
    long long bit_errors = 0;
    long long ops = 0;
    long long candidates = 0;
    long long restarts = 0;
};

struct SweepContext {
    const SweepConfig& cfg;
    Constellation constellation;
    SmxCodebook codebook;  // SMX schemes only
    int m = 0;
    double alpha = 0.0;
    bool needs_expansion = false;

    explicit SweepContext(const SweepConfig& c) : cfg(c) {
        cfg.validate();
        constellation = build_constellation(cfg.mod_order);
        m = spectral_efficiency(cfg.scheme, cfg.nt, cfg.mod_order);
        if (m > 24) throw ConfigError("config: spectral efficiency above 24 bits");
        if (cfg.scheme == Scheme::SMX) codebook = build_smx_codebook(cfg.nt, constellation);
        alpha = solve_alpha(cfg.nr, cfg.target_miss);
        for (DetectorKind k : cfg.detectors)
            if (k == DetectorKind::SmRx) needs_expansion = true;
    }
};

inline void run_one_trial(const SweepContext& ctx, int snr_index, double sigma_n2,
                          SphereRadius radius, long long trial,
                          std::vector<DetectorAccum>& acc) {
    const SweepConfig& cfg = ctx.cfg;
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(snr_index),
                  static_cast<std::uint64_t>(trial));
    const std::uint32_t word = rng.bits(ctx.m);
    const TxVector sent = cfg.scheme == Scheme::SM ? sm_map(word, cfg.nt, ctx.constellation)
                                                   : smx_map(word, cfg.nt, ctx.constellation);
    const ComplexMatrix h = draw_channel(cfg.nr, cfg.nt, rng);
    const cvec y = transmit(h, sent, ctx.constellation, sigma_n2, rng);

    rvec y_bar;
    RealMatrix h_bar;
    if (ctx.needs_expansion) {
        y_bar = real_expand_vector(y);
        h_bar = real_expand_matrix(h);
    }

    for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
        DetectionOutcome out;
        switch (cfg.detectors[i]) {
            case DetectorKind::SmMl:
                out = sm_ml(y, h, ctx.constellation, cfg.nt);
                break;
            case DetectorKind::SmRx:
                out = sm_rx(y_bar, h_bar, ctx.constellation, cfg.nt, radius);
                break;
            case DetectorKind::SmTx:
                out = sm_tx(y, h, ctx.constellation, cfg.nt, cfg.nr, sigma_n2, radius);
                break;
            case DetectorKind::SmxMl:
                out = smx_ml(y, h, ctx.codebook);
                break;
            case DetectorKind::SmxSd:
                out = smx_sd(y, h, ctx.codebook, cfg.nt, cfg.nr, sigma_n2, radius);
                break;
        }
        acc[i].bit_errors += bit_errors(sent, out.estimate, ctx.constellation);
        acc[i].ops += out.ops;
        acc[i].candidates += out.candidates_examined;
        acc[i].restarts += out.restarts;
    }
}

// Trials [lo, hi) distributed over workers in fixed chunks. Every per-trial
// stream is keyed by the global trial index and all accumulators are
// integers, so the result does not depend on the worker count.
inline void run_trials(const SweepContext& ctx, int snr_index, double sigma_n2,
                       SphereRadius radius, long long lo, long long hi,
                       std::vector<DetectorAccum>& acc) {
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    int nthreads = ctx.cfg.threads > 0 ? ctx.cfg.threads : (hw > 0 ? hw : 1);
    nthreads = static_cast<int>(std::min<long long>(nthreads, hi - lo));
    if (nthreads <= 1) {
        for (long long t = lo; t < hi; ++t) run_one_trial(ctx, snr_index, sigma_n2, radius, t, acc);
        return;
    }
    const long long chunk = 256;
    std::atomic<long long> cursor{lo};
    std::vector<std::vector<DetectorAccum>> partial(
        nthreads, std::vector<DetectorAccum>(ctx.cfg.detectors.size()));
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w] {
            for (;;) {
                const long long start = cursor.fetch_add(chunk);
                if (start >= hi) break;
                const long long end = std::min(start + chunk, hi);
                for (long long t = start; t < end; ++t)
                    run_one_trial(ctx, snr_index, sigma_n2, radius, t, partial[w]);
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& p : partial)
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i].bit_errors += p[i].bit_errors;
            acc[i].ops += p[i].ops;
            acc[i].candidates += p[i].candidates;
            acc[i].restarts += p[i].restarts;
        }
}

}  // namespace detail

// Monte Carlo sweep over the SNR grid. Each point runs at least cfg.trials
// trials and keeps extending in blocks (up to cfg.max_trials) while any
// detector is short of cfg.min_bit_errors. Output is a pure function of
// (config, seed).
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    detail::SweepContext ctx(cfg);
    std::vector<SweepRecord> records;
    const long long base = cfg.trials;
    const long long cap = std::max(cfg.max_trials, base);
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double sigma_n2 = std::pow(10.0, -cfg.snr_db[si] / 10.0);
        const SphereRadius radius = initial_radius(cfg.nr, sigma_n2, ctx.alpha);
        std::vector<detail::DetectorAccum> acc(cfg.detectors.size());
        long long done = 0;
        for (;;) {
            const long long n = std::min(base, cap - done);
            detail::run_trials(ctx, static_cast<int>(si), sigma_n2, radius, done, done + n, acc);
            done += n;
            if (done >= cap) break;
            bool short_of_errors = false;
            for (const auto& a : acc)
                if (a.bit_errors < cfg.min_bit_errors) short_of_errors = true;
            if (!short_of_errors) break;
        }
        for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
            SweepRecord rec;
            rec.detector = detector_name(cfg.detectors[i]);
            rec.snr_db = cfg.snr_db[si];
            rec.trials = done;
            rec.bit_errors = acc[i].bit_errors;
            rec.ber = static_cast<double>(acc[i].bit_errors) /
                      (static_cast<double>(done) * ctx.m);
            rec.mean_ops = static_cast<double>(acc[i].ops) / static_cast<double>(done);
            rec.rel_pct = 100.0 * rec.mean_ops / static_cast<double>(c_sm_ml(ctx.m, cfg.nr));
            rec.restarts = acc[i].restarts;
            rec.mean_card_theta =
                static_cast<double>(acc[i].candidates) / static_cast<double>(done);
            rec.censored = acc[i].bit_errors < cfg.min_bit_errors;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

// Reconciles one sweep row against the closed forms: exhaustive detectors
// carry an exact formula value, the sphere decoders only a measured mean.
inline ComplexityReport reconcile_complexity(const SweepRecord& rec, int m, int nt, int nr) {
    ComplexityReport rep;
    rep.detector = rec.detector;
    if (rec.detector == "sm-ml")
        rep.formula_value = c_sm_ml(m, nr);
    else if (rec.detector == "smx-ml")
        rep.formula_value = c_smx_ml(m, nt, nr);
    rep.counted_mean = rec.mean_ops;
    rep.rel_pct = rec.rel_pct;
    return rep;
}

inline void emit(const std::vector<SweepRecord>& records, const std::string& format,
                 std::ostream& os) {
    if (records.empty()) throw IoError("emit: no records");
    if (format == "csv") {
        os << "detector,snr_db,trials,bit_errors,ber,mean_ops,rel_pct,restarts,mean_card_theta\n";
        os << std::setprecision(17);
        for (const auto& r : records)
            os << r.detector << ',' << r.snr_db << ',' << r.trials << ',' << r.bit_errors << ','
               << r.ber << ',' << r.mean_ops << ',' << r.rel_pct << ',' << r.restarts << ','
               << r.mean_card_theta << '\n';
        return;
    }
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : records)
            arr.push_back({{"detector", r.detector},
                           {"snr_db", r.snr_db},
                           {"trials", r.trials},
                           {"bit_errors", r.bit_errors},
                           {"ber", r.ber},
                           {"mean_ops", r.mean_ops},
                           {"rel_pct", r.rel_pct},
                           {"restarts", r.restarts},
                           {"mean_card_theta", r.mean_card_theta},
                           {"censored", r.censored}});
        os << arr.dump(2) << '\n';
        return;
    }
    throw ConfigError("emit: unknown format " + format);
}

inline void emit(const std::vector<SweepRecord>& records, const std::string& format,
                 const std::string& path) {
    if (path == "-" || path.empty()) throw IoError("emit: no output path");
    std::ofstream os(path);
    if (!os) throw IoError("emit: cannot open " + path);
    emit(records, format, os);
    if (!os) throw IoError("emit: write failed for " + path);
}

inline std::vector<SweepRecord> parse_csv(std::istream& is) {
    std::vector<SweepRecord> records;
    std::string line;
    if (!std::getline(is, line)) throw IoError("parse_csv: empty input");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        SweepRecord r;
        std::getline(ss, r.detector, ',');
        std::getline(ss, field, ',');
        r.snr_db = std::stod(field);
        std::getline(ss, field, ',');
        r.trials = std::stoll(field);
        std::getline(ss, field, ',');
        r.bit_errors = std::stoll(field);
        std::getline(ss, field, ',');
        r.ber = std::stod(field);
        std::getline(ss, field, ',');
        r.mean_ops = std::stod(field);
        std::getline(ss, field, ',');
        r.rel_pct = std::stod(field);
        std::getline(ss, field, ',');
        r.restarts = std::stoll(field);
        std::getline(ss, field, ',');
        r.mean_card_theta = std::stod(field);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace smsd
