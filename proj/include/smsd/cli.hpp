#pragma once

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smsd/harness.hpp"

namespace smsd {

// Subcommands: simulate (Monte Carlo sweep), bound (union-bound table),
// complexity (closed-form operation counts), radius (alpha calibration).
// Exit codes: 0 ok, 1 runtime failure, 2 usage error.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"sphere-decoded spatial modulation: simulation and analysis"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file mirroring the flags");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo BER/complexity sweep");
    sim->fallthrough();
    std::string scheme = "sm";
    sim->add_option("--scheme", scheme, "transmission scheme")
        ->check(CLI::IsMember({"sm", "smx"}))
        ->capture_default_str();
    SweepConfig cfg;
    sim->add_option("--nt", cfg.nt, "transmit antennas")->capture_default_str();
    sim->add_option("--nr", cfg.nr, "receive antennas")->capture_default_str();
    sim->add_option("--mod", cfg.mod_order, "constellation order M")->capture_default_str();
    sim->add_option("--snr", cfg.snr_db, "SNR grid in dB (strictly increasing)")
        ->expected(-1);
    sim->add_option("--trials", cfg.trials, "base trials per SNR point")->capture_default_str();
    sim->add_option("--max-trials", cfg.max_trials,
                    "cap when extending runs to reach --min-errors (0: no extension)")
        ->capture_default_str();
    std::vector<std::string> detector_names = {"sm-ml"};
    sim->add_option("--detectors", detector_names,
                    "detectors: sm-ml, sm-rx, sm-tx, smx-ml, smx-sd")
        ->delimiter(',')
        ->expected(-1);
    sim->add_option("--seed", cfg.seed, "master RNG seed (or env SMSD_SEED)")
        ->envname("SMSD_SEED")
        ->capture_default_str();
    sim->add_option("--min-errors", cfg.min_bit_errors,
                    "bit errors per point before a BER estimate counts as resolved")
        ->capture_default_str();
    sim->add_option("--threads", cfg.threads, "worker threads (0: hardware)")
        ->capture_default_str();
    sim->add_option("--target-miss", cfg.target_miss,
                    "sphere miss probability used to calibrate the initial radius")
        ->capture_default_str();
    std::string out_path = "-";
    std::string format = "csv";
    sim->add_option("--out", out_path, "output path ('-' for stdout)")->capture_default_str();
    sim->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // bound
    auto* bound = app.add_subcommand("bound", "closed-form union bound on the SM BER");
    bound->fallthrough();
    BoundSpec bspec;
    bspec.nt = 4;
    bspec.nr = 4;
    bspec.mod_order = 16;
    bspec.snr_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
    bound->add_option("--nt", bspec.nt, "transmit antennas")->capture_default_str();
    bound->add_option("--nr", bspec.nr, "receive antennas")->capture_default_str();
    bound->add_option("--mod", bspec.mod_order, "constellation order M")->capture_default_str();
    bound->add_option("--snr", bspec.snr_db, "SNR grid in dB")->expected(-1);

    // complexity
    auto* comp = app.add_subcommand("complexity", "closed-form operation-count table");
    comp->fallthrough();
    std::vector<int> comp_nt = {2, 4, 8, 16, 32};
    int comp_m = 6;
    int comp_nr = 2;
    comp->add_option("--nt", comp_nt, "transmit antenna counts")->expected(-1);
    comp->add_option("--m", comp_m, "spectral efficiency in bits")->capture_default_str();
    comp->add_option("--nr", comp_nr, "receive antennas")->capture_default_str();

    // radius
    auto* rad = app.add_subcommand("radius", "initial-radius constants alpha per Nr");
    rad->fallthrough();
    std::vector<int> rad_nr = {1, 2, 4};
    double rad_miss = 1e-6;
    rad->add_option("--nr", rad_nr, "receive antenna counts")->expected(-1);
    rad->add_option("--target-miss", rad_miss, "sphere miss probability")->capture_default_str();

    try {
        std::vector<const char*> argv;
        argv.push_back("smsd");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            cfg.scheme = scheme == "sm" ? Scheme::SM : Scheme::SMX;
            cfg.detectors.clear();
            for (const auto& n : detector_names) cfg.detectors.push_back(detector_from_name(n));
            const std::vector<SweepRecord> records = run_sweep(cfg);
            if (out_path == "-")
                emit(records, format, out);
            else
                emit(records, format, out_path);
        } else if (bound->parsed()) {
            const Constellation c = build_constellation(bspec.mod_order);
            const std::vector<double> bers = union_bound_ber(bspec, c);
            out << "snr_db,ber_bound\n" << std::setprecision(10);
            for (std::size_t i = 0; i < bspec.snr_db.size(); ++i)
                out << bspec.snr_db[i] << ',' << bers[i] << '\n';
        } else if (comp->parsed()) {
            out << "nt,c_sm_ml,c_smx_ml,ml_reduction_pct,c_tx_precomp\n"
                << std::setprecision(10);
            for (int nt : comp_nt)
                out << nt << ',' << c_sm_ml(comp_m, comp_nr) << ','
                    << c_smx_ml(comp_m, nt, comp_nr) << ',' << relative_ml_reduction(nt) << ','
                    << c_tx_precomp(nt, comp_nr) << '\n';
        } else if (rad->parsed()) {
            out << "nr,alpha,r2_over_sigma_n2\n" << std::setprecision(6);
            for (int nr : rad_nr) {
                const double a = solve_alpha(nr, rad_miss);
                out << nr << ',' << a << ',' << a * nr << '\n';
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace smsd
