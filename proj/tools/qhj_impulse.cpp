// Command-line front end: invariant verification, trajectory sampling,
// single-event energy transfer, and Monte Carlo ensembles with CSV output.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhj/config.hpp"
#include "qhj/csv.hpp"
#include "qhj/ensemble.hpp"
#include "qhj/verify.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<double> a, b, c, F, eps, gamma, T;
    std::optional<std::uint64_t> n, seed;
    std::optional<int> threads;
    std::optional<std::string> out, format;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--config", ov.config_path, "Config file (flat key = value with sections)");
    cmd->add_option("--a", ov.a, "Microstate coefficient a");
    cmd->add_option("--b", ov.b, "Microstate coefficient b");
    cmd->add_option("--c", ov.c, "Microstate coefficient c");
    cmd->add_option("--F", ov.F, "Impulse strength");
    cmd->add_option("--eps", ov.eps, "Wall band width");
    cmd->add_option("--gamma", ov.gamma, "Impulse time");
    cmd->add_option("--T", ov.T, "Integrated impulse time measure");
    cmd->add_option("--n", ov.n, "Sample count");
    cmd->add_option("--seed", ov.seed, "RNG seed");
    cmd->add_option("--threads", ov.threads, "Worker threads (QHJ_IMPULSE_THREADS as fallback)");
    cmd->add_option("--out", ov.out, "Output path (stdout when omitted)");
    cmd->add_option("--format", ov.format, "Output format")->check(CLI::IsMember({"csv"}));
}

qhj::RunConfig resolve(const Overrides& ov) {
    qhj::RunConfig cfg = ov.config_path.empty() ? qhj::RunConfig{} : qhj::parse_config(ov.config_path);
    if (ov.a) cfg.a = *ov.a;
    if (ov.b) cfg.b = *ov.b;
    if (ov.c) cfg.c = *ov.c;
    if (ov.F) cfg.F = *ov.F;
    if (ov.eps) cfg.eps = *ov.eps;
    if (ov.gamma) cfg.gamma = *ov.gamma;
    if (ov.T) cfg.T = *ov.T;
    if (ov.n) cfg.n = *ov.n;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.out) cfg.out_path = *ov.out;
    if (ov.format) cfg.format = *ov.format;
    if (ov.threads) {
        cfg.threads = *ov.threads;
    } else if (const char* env = std::getenv("QHJ_IMPULSE_THREADS")) {
        try {
            cfg.threads = std::stoi(env);
        } catch (const std::exception&) {
            throw qhj::validation_error("QHJ_IMPULSE_THREADS is not an integer: " + std::string(env));
        }
    }
    if (cfg.threads < 1) throw qhj::validation_error("threads must be >= 1");
    return cfg;
}

void emit(const qhj::CsvWriter& csv, const std::string& path) {
    if (path.empty())
        std::cout << csv.text();
    else
        csv.save(path);
}

// Self-contained companion script rendering the ensemble summary.
void emit_plot_script(const std::string& csv_path) {
    const std::string script_path = csv_path + ".plot.py";
    std::ofstream out(script_path, std::ios::binary);
    if (!out) throw qhj::io_error("cannot open '" + script_path + "' for writing");
    out << "#!/usr/bin/env python3\n"
           "\"\"\"Plot ensemble mean E1 with 3-sigma bands against the Copenhagen values.\"\"\"\n"
           "import csv\n"
           "import matplotlib.pyplot as plt\n"
           "\n"
           "rows = list(csv.DictReader(open(" << std::quoted(csv_path) << ")))\n"
           "eps = [float(r[\"epsilon\"]) for r in rows]\n"
           "mean = [float(r[\"mean_e1\"]) for r in rows]\n"
           "band = [3 * float(r[\"stderr_e1\"]) for r in rows]\n"
           "cop_orig = [float(r[\"copenhagen_e1_original\"]) for r in rows]\n"
           "cop_err = [float(r[\"copenhagen_e1_errata\"]) for r in rows]\n"
           "\n"
           "fig, ax = plt.subplots()\n"
           "ax.errorbar(eps, mean, yerr=band, fmt=\"o\", capsize=4,\n"
           "            label=\"trajectory ensemble mean (3 sigma)\")\n"
           "ax.plot(eps, cop_orig, \"s--\", label=\"Copenhagen E1 (original)\")\n"
           "ax.plot(eps, cop_err, \"^--\", label=\"Copenhagen E1 (errata)\")\n"
           "ax.axhline(0.0, color=\"gray\", lw=0.8)\n"
           "ax.set_xlabel(\"band width epsilon\")\n"
           "ax.set_ylabel(\"first-order energy transfer E1\")\n"
           "ax.legend()\n"
           "fig.savefig(" << std::quoted(csv_path + ".png") << ", dpi=150)\n"
           "print(\"wrote " << csv_path << ".png\")\n";
    if (!out) throw qhj::io_error("write failed for '" + script_path + "'");
}

int cmd_verify(const qhj::RunConfig& cfg, const std::string& group) {
    const auto well = qhj::make_well(cfg.hbar, cfg.m, cfg.q);
    qhj::make_microstate(cfg.a, cfg.b, cfg.c); // surface config mistakes before the suites run
    const auto results = qhj::run_verify(well, group);
    if (results.empty()) throw qhj::validation_error("verify: no group matches '" + group + "'");
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.group << "  (" << r.detail << ")\n";
        all = all && r.passed;
    }
    if (!all) throw qhj::numerical_error("verify: at least one invariant group failed");
    return 0;
}

int cmd_trajectory(const qhj::RunConfig& cfg) {
    const auto well = qhj::make_well(cfg.hbar, cfg.m, cfg.q);
    const auto ms = qhj::make_microstate(cfg.a, cfg.b, cfg.c);
    if (!qhj::trajectory_is_monotone(well, ms))
        throw qhj::validation_error("trajectory: t(x) is not monotone for this microstate; "
                                    "the sheet bookkeeping does not apply");
    if (cfg.n_points < 0 || cfg.n_cycles < 1)
        throw qhj::validation_error("trajectory: need n_points >= 0 and n_cycles >= 1");
    qhj::TrajectoryClock clock(well, ms, cfg.tau0);
    qhj::CsvWriter csv({"t", "x", "direction", "cycle", "sheet_epoch"});
    const double span = cfg.n_cycles * clock.period();
    for (int i = 0; i < cfg.n_points; ++i) {
        const double t = cfg.tau0 + (cfg.n_points > 1 ? span * i / (cfg.n_points - 1) : 0.0);
        const auto snap = qhj::locate_particle(clock, t);
        csv.row({qhj::format_double(t), qhj::format_double(snap.x), qhj::to_string(snap.direction),
                 std::to_string(snap.cycle_index), qhj::format_double(snap.sheet_epoch)});
    }
    emit(csv, cfg.out_path);
    return 0;
}

int cmd_perturb(const qhj::RunConfig& cfg) {
    const auto well = qhj::make_well(cfg.hbar, cfg.m, cfg.q);
    const auto ms = qhj::make_microstate(cfg.a, cfg.b, cfg.c);
    const auto impulse = qhj::make_impulse(well, cfg.F, cfg.eps, cfg.gamma, cfg.T);
    if (qhj::epsilon_outside_recommended(well, impulse))
        std::cerr << "note: eps > q/10, wall-band truncation error grows as eps^3\n";
    const auto traj = qhj::trajectory_e1(well, ms, impulse, cfg.tau0);
    const auto orig = qhj::copenhagen_e1(well, impulse, qhj::CopenhagenVariant::original);
    const auto errata = qhj::copenhagen_e1(well, impulse, qhj::CopenhagenVariant::errata);
    std::cout << "trajectory E1 = " << qhj::format_double(traj.e1)
              << "  case = " << qhj::to_string(traj.case_id)
              << "  window = [" << qhj::format_double(traj.window.lower) << ", "
              << qhj::format_double(traj.window.upper) << "]\n"
              << "copenhagen E1 (original) = " << qhj::format_double(orig.e1)
              << "  (matrix element " << qhj::format_double(orig.matrix_element) << ")\n"
              << "copenhagen E1 (errata)   = " << qhj::format_double(errata.e1)
              << "  (matrix element " << qhj::format_double(errata.matrix_element) << ")\n";
    if (!cfg.out_path.empty()) {
        qhj::CsvWriter csv({"e1_trajectory", "case", "window_lower", "window_upper",
                            "e1_copenhagen_original", "e1_copenhagen_errata"});
        csv.row({qhj::format_double(traj.e1), qhj::to_string(traj.case_id),
                 qhj::format_double(traj.window.lower), qhj::format_double(traj.window.upper),
                 qhj::format_double(orig.e1), qhj::format_double(errata.e1)});
        csv.save(cfg.out_path);
    }
    return 0;
}

int cmd_ensemble(const qhj::RunConfig& cfg, const std::vector<double>& sweep,
                 const std::string& samples_path) {
    const auto well = qhj::make_well(cfg.hbar, cfg.m, cfg.q);
    std::vector<double> eps_list = sweep.empty() ? std::vector<double>{cfg.eps} : sweep;

    qhj::CsvWriter csv({"epsilon", "n", "mean_e1", "stderr_e1", "n_interior_zero",
                        "n_left_wall_plus", "n_right_wall_plus", "n_right_wall_minus",
                        "n_left_wall_minus", "copenhagen_e1_original", "copenhagen_e1_errata"});
    for (double eps : eps_list) {
        qhj::EnsembleSpec spec;
        spec.n_samples = cfg.n;
        spec.rng_seed = cfg.seed;
        spec.impulse = qhj::make_impulse(well, cfg.F, eps, cfg.gamma, cfg.T);
        if (cfg.random_set) {
            qhj::SamplerParams params;
            params.a_min = cfg.a_min;
            params.a_max = cfg.a_max;
            params.rho = cfg.rho;
            spec.source = qhj::MicrostateSource::random_set(cfg.set_count, params);
        } else {
            spec.source = qhj::MicrostateSource::fixed(qhj::make_microstate(cfg.a, cfg.b, cfg.c));
        }
        std::vector<qhj::SampleRecord> records;
        const auto rep = qhj::run_ensemble(spec, well, cfg.threads,
                                           samples_path.empty() ? nullptr : &records);
        const auto& h = rep.case_histogram;
        auto count = [&](qhj::E1Case c) { return std::to_string(h[static_cast<std::size_t>(c)]); };
        csv.row({qhj::format_double(eps), std::to_string(rep.n), qhj::format_double(rep.mean_e1),
                 qhj::format_double(rep.stderr_e1), count(qhj::E1Case::interior_zero),
                 count(qhj::E1Case::left_wall_plus), count(qhj::E1Case::right_wall_plus),
                 count(qhj::E1Case::right_wall_minus), count(qhj::E1Case::left_wall_minus),
                 qhj::format_double(rep.copenhagen_e1_original),
                 qhj::format_double(rep.copenhagen_e1_errata)});
        if (!samples_path.empty()) {
            qhj::CsvWriter sample_csv({"index", "tau0", "e1", "case"});
            for (const auto& r : records)
                sample_csv.row({std::to_string(r.index), qhj::format_double(r.tau0),
                                qhj::format_double(r.e1),
                                r.skipped ? "skipped" : qhj::to_string(r.case_id)});
            const std::string path = eps_list.size() == 1
                ? samples_path
                : samples_path + ".eps" + qhj::format_double(eps) + ".csv";
            sample_csv.save(path);
        }
    }
    emit(csv, cfg.out_path);
    if (!cfg.out_path.empty()) emit_plot_script(cfg.out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory vs Copenhagen first-order energy transfer in a square well"};
    app.require_subcommand(1);

    Overrides ov_verify, ov_traj, ov_perturb, ov_ens;
    std::string group;
    std::vector<double> sweep;
    std::string samples_path;

    auto* verify = app.add_subcommand("verify", "Run the invariant suites");
    add_common_options(verify, ov_verify);
    verify->add_option("--group", group, "Only run groups whose name contains this string");

    auto* trajectory = app.add_subcommand("trajectory", "Sample x(t) over whole cycles");
    add_common_options(trajectory, ov_traj);

    auto* perturb = app.add_subcommand("perturb", "Single-impulse energy transfer, both representations");
    add_common_options(perturb, ov_perturb);

    auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo average over orbit phases");
    add_common_options(ensemble, ov_ens);
    ensemble->add_option("--sweep", sweep, "Band widths to sweep (one summary row each)");
    ensemble->add_option("--samples", samples_path, "Also write a per-sample CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(resolve(ov_verify), group);
        if (trajectory->parsed()) return cmd_trajectory(resolve(ov_traj));
        if (perturb->parsed()) return cmd_perturb(resolve(ov_perturb));
        return cmd_ensemble(resolve(ov_ens), sweep, samples_path);
    } catch (const qhj::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const qhj::io_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const qhj::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
