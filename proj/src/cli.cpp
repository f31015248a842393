#include "qsdc/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qsdc/config.hpp"
#include "qsdc/errors.hpp"
#include "qsdc/experiment.hpp"
#include "qsdc/protocol.hpp"
#include "qsdc/report_io.hpp"

namespace qsdc::cli {

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format = "json";
    int verbosity = 0;
    std::size_t demo_n = 4;
    std::uint64_t demo_seed = 1;
};

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ConfigError("--out", "cannot write '" + path + "'");
    }
    file << text;
}

LoadedConfig load(const Options& opt) {
    LoadedConfig config = load_config(opt.config_path);
    if (opt.seed) {
        config.experiment.seed = *opt.seed;
    }
    return config;
}

void print_check_line(std::ostream& os, const char* label, const Proportion& p) {
    os << "  " << std::left << std::setw(12) << label << " checks=" << p.checks_run << " failed=" << p.checks_failed
       << " p_hat=" << io::format_probability(p.estimate) << " CI95=[" << io::format_probability(p.ci.low) << ", "
       << io::format_probability(p.ci.high) << "]";
    if (p.analytic) {
        os << " analytic=" << io::format_probability(*p.analytic);
    }
    os << "\n";
}

void print_summary(std::ostream& os, const ExperimentReport& r) {
    os << "attack: " << r.attack << " (" << r.abort_policy << ")\n"
       << "trials: " << r.summary.trials << " completed=" << r.summary.completed << " aborted=" << r.summary.aborted
       << " exhausted=" << r.summary.exhausted << "\n";
    print_check_line(os, "A-B check", r.detection.ab_check.all);
    print_check_line(os, "C-A check", r.detection.ca_check.all);
    print_check_line(os, "decoy check", r.detection.decoy_check.all);
    if (r.detection.nominal) {
        os << "  nominal detection probability " << io::format_probability(*r.detection.nominal)
           << " vs analytic A-B " << io::format_probability(r.detection.ab_check.all.analytic.value_or(0.0)) << "\n";
    }
    os << "fidelity: alice=" << io::format_probability(r.fidelity.alice)
       << " bob=" << io::format_probability(r.fidelity.bob)
       << " charlie=" << io::format_probability(r.fidelity.charlie) << "\n";
}

int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
    const LoadedConfig config = load(opt);
    const ExperimentReport report = run_experiment(config.experiment);
    const std::string text = opt.format == "csv" ? io::to_csv(report) : io::to_json(report).dump(2) + "\n";
    write_output(text, opt.out_path, out);
    if (opt.verbosity > 0) {
        print_summary(err, report);
    }
    if (report.summary.aborted > 0 && config.experiment.abort_policy == AbortPolicy::Strict) {
        const auto& fa = *report.summary.first_abort;
        err << "aborted: eavesdropper detected in trial " << fa.trial << " at round " << fa.round << " ("
            << to_string(fa.check) << "); " << report.summary.aborted << " of " << report.summary.trials
            << " trials aborted\n";
        return kAborted;
    }
    return kSuccess;
}

int cmd_oracle(const Options& opt, std::ostream& out, std::ostream& err) {
    const OracleVerdict verdict = exhaustive_oracle();
    out << " i j k | r s | x y | Alice(j,k) Bob(i,k) Charlie(i,j) | ok\n";
    for (const auto& row : verdict.rows) {
        out << " " << int(row.i) << " " << int(row.j) << " " << int(row.k) << " | " << int(row.bell.r) << " "
            << int(row.bell.s) << " | " << int(row.x) << " " << int(row.y) << " |    " << int(row.alice.first) << ","
            << int(row.alice.second) << "       " << int(row.bob.first) << "," << int(row.bob.second)
            << "        " << int(row.charlie.first) << "," << int(row.charlie.second) << "      | "
            << (row.ok ? "yes" : "NO") << "\n";
    }
    out << (verdict.passed ? "oracle: pass\n" : "oracle: FAIL\n");
    if (!opt.out_path.empty()) {
        write_output(io::to_json(verdict).dump(2) + "\n", opt.out_path, out);
    }
    if (!verdict.passed) {
        const auto& f = *verdict.failing;
        err << "decode mismatch for (i, j, k) = (" << int(f[0]) << ", " << int(f[1]) << ", " << int(f[2]) << ")\n";
        return kInternalError;
    }
    return kSuccess;
}

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
    const LoadedConfig config = load(opt);
    if (config.sweep_beta_sq.empty()) {
        throw ConfigError("sweep.beta_sq", "missing; the sweep subcommand needs a parameter grid");
    }
    const auto rows = detection_curve(config.experiment, config.sweep_beta_sq);
    const std::string text = opt.format == "csv" ? io::to_csv(rows) : io::to_json(rows).dump(2) + "\n";
    write_output(text, opt.out_path, out);
    if (opt.verbosity > 0) {
        for (const auto& row : rows) {
            err << "beta_sq=" << io::format_probability(row.beta_sq)
                << " ab=" << io::format_probability(row.ab_check.all.estimate) << " (analytic "
                << io::format_probability(row.ab_check.all.analytic.value_or(0.0)) << ")"
                << " decoy=" << io::format_probability(row.decoy_check.all.estimate) << " (analytic "
                << io::format_probability(row.decoy_check.all.analytic.value_or(0.0)) << ")\n";
        }
    }
    return kSuccess;
}

std::string bits_string(const std::vector<Bit>& bits) {
    std::string s;
    for (Bit b : bits) {
        s += b ? '1' : '0';
    }
    return s;
}

int cmd_demo(const Options& opt, std::ostream& out) {
    if (opt.demo_n < 1 || opt.demo_n > 16) {
        throw ConfigError("--n", "must be between 1 and 16");
    }
    RandomStream rng(opt.demo_seed);
    const MessageTriple messages = MessageTriple::random(opt.demo_n, rng);
    const ProtocolRun run = run_protocol(messages, SchedulePolicy{}, AbortPolicy::Strict, AttackModel::none(), rng);

    out << "secrets  Alice i=" << bits_string(messages.alice) << "  Bob j=" << bits_string(messages.bob)
        << "  Charlie k=" << bits_string(messages.charlie) << "\n\n";
    for (const auto& rec : run.records) {
        out << "round " << std::setw(2) << rec.round << ": ";
        switch (rec.kind) {
        case RoundKind::BobEavesdropCheck:
            out << "Bob measures t in " << to_string(*rec.check_basis) << "; Alice checks h -> "
                << (*rec.check_passed ? "correlated, continue" : "mismatch, abort");
            break;
        case RoundKind::BobControlCheck:
            out << "Bob CM; Charlie measures t in " << to_string(*rec.check_basis) << "; Alice checks h -> "
                << (*rec.check_passed ? "correlated, continue" : "mismatch, abort");
            break;
        case RoundKind::CharlieDecoyCheck:
            out << "Bob MM (j=" << int(*rec.bob_bit) << "); Charlie CM sends decoy " << to_string(*rec.decoy)
                << "; Alice measures in " << to_string(*rec.check_basis) << " -> "
                << (*rec.check_passed ? "match, continue" : "mismatch, abort");
            break;
        case RoundKind::MessageRound: {
            const auto [x, y] = *rec.announcement;
            const Bit j = *rec.bob_bit;
            const Bit k = *rec.charlie_bit;
            out << "n=" << *rec.message_index << " Bob applies " << to_string(encode_bob(j)) << " (j=" << int(j)
                << "), Charlie applies " << to_string(encode_charlie(k)) << " (k=" << int(k) << "); Alice reads "
                << to_string(*rec.bell_outcome) << ", i=" << int(*rec.alice_bit) << ", announces (x,y)=("
                << int(x) << "," << int(y) << "); x^y=" << int(x ^ y) << " j^k=" << int(j ^ k);
            break;
        }
        }
        out << "\n";
    }

    const auto& d = run.decoded;
    out << "\nstatus: " << to_string(run.status) << " after " << run.records.size() << " rounds\n"
        << "Alice   decodes j=" << bits_string(d.alice_j) << " k=" << bits_string(d.alice_k) << "\n"
        << "Bob     decodes i=" << bits_string(d.bob_i) << " k=" << bits_string(d.bob_k) << "\n"
        << "Charlie decodes i=" << bits_string(d.charlie_i) << " j=" << bits_string(d.charlie_j) << "\n";
    const bool correct = d.alice_j == messages.bob && d.alice_k == messages.charlie && d.bob_i == messages.alice &&
                         d.bob_k == messages.charlie && d.charlie_i == messages.alice && d.charlie_j == messages.bob;
    out << (correct ? "all decodes correct\n" : "DECODE MISMATCH\n");
    return correct ? kSuccess : kInternalError;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Three-party simultaneous QSDC simulator"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opt.config_path, "Experiment config file (JSON)");
        if (needs_config) {
            c->required();
        }
        sub->add_option("--seed", opt.seed, "Seed override (wins over the config file)");
        sub->add_option("--out", opt.out_path, "Report output path (default: stdout)");
        sub->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("-v", "Verbose summary on stderr");
    };

    auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment");
    add_common(run_cmd, true);
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive decode oracle over all (i, j, k)");
    oracle_cmd->add_option("--out", opt.out_path, "Write the truth table as JSON");
    auto* sweep_cmd = app.add_subcommand("sweep", "Entangle-and-measure detection curve over sweep.beta_sq");
    add_common(sweep_cmd, true);
    auto* demo_cmd = app.add_subcommand("demo", "Round-by-round trace of one unattacked run");
    demo_cmd->add_option("--n", opt.demo_n, "Message length (1..16)");
    demo_cmd->add_option("--seed", opt.demo_seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }

    for (const auto* sub : {run_cmd, sweep_cmd}) {
        if (sub->parsed()) {
            opt.verbosity = static_cast<int>(sub->count("-v"));
        }
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(opt, out, err);
        }
        if (oracle_cmd->parsed()) {
            return cmd_oracle(opt, out, err);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(opt, out, err);
        }
        return cmd_demo(opt, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvariantViolation& e) {
        err << "internal invariant violated: " << e.what() << "\n";
        return kInternalError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternalError;
    }
}

} // namespace qsdc::cli
