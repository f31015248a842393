#pragma once

// Monte Carlo harness: runs many seeded protocol executions, tallies check
// outcomes against the analytic detection probabilities, audits the public
// transcript and measures decoding fidelity.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsdc/adversary.hpp"
#include "qsdc/protocol.hpp"
#include "qsdc/statistics.hpp"

namespace qsdc {

struct ExperimentConfig {
    std::size_t message_length = 64;
    std::size_t trials = 1;
    SchedulePolicy schedule;
    AttackModel attack;
    AbortPolicy abort_policy = AbortPolicy::Strict;
    std::uint64_t seed = 0;
    /// Worker threads; 0 or 1 runs trials inline. Results do not depend on it.
    unsigned threads = 1;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Failures out of `checks_run` for one check population.
struct Proportion {
    std::uint64_t checks_run = 0;
    std::uint64_t checks_failed = 0;
    double estimate = 0.0;
    stats::Interval ci{0.0, 1.0};
    std::optional<double> analytic;
    std::optional<double> z_score;

    friend bool operator==(const Proportion&, const Proportion&) = default;
};

/// One check kind, overall and split by basis. For decoy checks the split is
/// by decoy family: Z = {|0>, |1>}, X = {|+>, |->}.
struct CheckStats {
    Proportion all;
    Proportion basis_z;
    Proportion basis_x;

    friend bool operator==(const CheckStats&, const CheckStats&) = default;
};

struct DetectionReport {
    CheckStats ab_check;
    CheckStats ca_check;
    CheckStats decoy_check;
    /// Detection probability quoted by the scheme's security argument for this
    /// attack family, reported next to the analytic value.
    std::optional<double> nominal;

    const CheckStats& of(RoundKind kind) const;

    friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

struct LeakageReport {
    std::uint64_t rounds_audited = 0;
    /// Fraction of message rounds with x XOR y = j XOR k.
    double parity_identity_fraction = 1.0;
    /// Plug-in I((x, y); secret) in bits, for each party's secret bit.
    double mi_announcement_alice = 0.0;
    double mi_announcement_bob = 0.0;
    double mi_announcement_charlie = 0.0;
    /// Plug-in I(x XOR y; j XOR k) in bits.
    double mi_parity = 0.0;

    friend bool operator==(const LeakageReport&, const LeakageReport&) = default;
};

/// Per party: fraction of the 2N counterpart bits decoded correctly, averaged
/// over trials. Undelivered bits count as incorrect.
struct Fidelity {
    double alice = 1.0;
    double bob = 1.0;
    double charlie = 1.0;
    /// Fraction of message bits delivered before the run ended.
    double delivered = 1.0;

    friend bool operator==(const Fidelity&, const Fidelity&) = default;
};

struct FirstAbort {
    std::uint64_t trial = 0;
    std::uint64_t round = 0;
    RoundKind check = RoundKind::BobEavesdropCheck;

    friend bool operator==(const FirstAbort&, const FirstAbort&) = default;
};

struct RunSummary {
    std::uint64_t trials = 0;
    std::uint64_t completed = 0;
    std::uint64_t aborted = 0;
    std::uint64_t exhausted = 0;
    std::uint64_t rounds = 0;
    std::optional<FirstAbort> first_abort;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    std::uint64_t message_length = 0;
    std::string attack;
    std::string abort_policy;
    RunSummary summary;
    DetectionReport detection;
    LeakageReport leakage;
    Fidelity fidelity;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Deterministic in `config` (including seed); independent of thread count.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct OracleRow {
    Bit i = 0, j = 0, k = 0;
    BellLabel bell;
    Bit x = 0, y = 0;
    std::pair<Bit, Bit> alice;    // (j, k)
    std::pair<Bit, Bit> bob;      // (i, k)
    std::pair<Bit, Bit> charlie;  // (i, j)
    bool ok = false;
};

struct OracleVerdict {
    bool passed = false;
    std::vector<OracleRow> rows;
    std::optional<std::array<Bit, 3>> failing;
};

/// All eight (i, j, k) through one unattacked message round each.
OracleVerdict exhaustive_oracle();

struct CurveRow {
    double beta_sq = 0.0;
    CheckStats ab_check;
    CheckStats decoy_check;

    friend bool operator==(const CurveRow&, const CurveRow&) = default;
};

/// Sweeps the entangle-and-measure strength |beta|^2 over `beta_sq_grid`,
/// reusing `base` for everything except the attack amplitudes. Uses the
/// attack segments of `base` (A->B and C->A when it has none) and always
/// records and continues. Throws ConfigError on an empty grid or values
/// outside [0, 1].
std::vector<CurveRow> detection_curve(const ExperimentConfig& base, std::span<const double> beta_sq_grid);

std::string to_string(AbortPolicy policy);

} // namespace qsdc
