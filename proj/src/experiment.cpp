#include "qsdc/experiment.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <mutex>
#include <thread>

#include "qsdc/errors.hpp"

namespace qsdc {

namespace {

struct Tally {
    std::uint64_t run = 0;
    std::uint64_t failed = 0;

    void add(bool passed) {
        ++run;
        failed += passed ? 0 : 1;
    }
    void merge(const Tally& o) {
        run += o.run;
        failed += o.failed;
    }
};

// [check kind][0 = all, 1 = Z basis, 2 = X basis]
using CheckTallies = std::array<std::array<Tally, 3>, 3>;

struct TrialResult {
    CheckTallies checks{};
    // Message-round histogram over (x, y, i, j, k), index 16x + 8y + 4i + 2j + k.
    std::array<std::uint64_t, 32> leak{};
    std::uint64_t parity_ok = 0;
    std::uint64_t message_rounds = 0;
    std::uint64_t correct_alice = 0;
    std::uint64_t correct_bob = 0;
    std::uint64_t correct_charlie = 0;
    std::uint64_t delivered = 0;
    std::uint64_t rounds = 0;
    RunStatus status = RunStatus::Completed;
    std::optional<AbortInfo> abort;
};

std::size_t check_slot(RoundKind kind) {
    switch (kind) {
    case RoundKind::BobEavesdropCheck:
        return 0;
    case RoundKind::BobControlCheck:
        return 1;
    case RoundKind::CharlieDecoyCheck:
        return 2;
    case RoundKind::MessageRound:
        break;
    }
    throw InvariantViolation("message round has no check slot");
}

constexpr std::array<RoundKind, 3> kCheckKinds = {RoundKind::BobEavesdropCheck, RoundKind::BobControlCheck,
                                                  RoundKind::CharlieDecoyCheck};

TrialResult run_trial(const ExperimentConfig& config, std::uint64_t trial) {
    RandomStream rng = RandomStream::derive(config.seed, trial);
    const MessageTriple messages = MessageTriple::random(config.message_length, rng);
    const ProtocolRun run = run_protocol(messages, config.schedule, config.abort_policy, config.attack, rng);

    TrialResult result;
    result.status = run.status;
    result.abort = run.abort;
    result.rounds = run.records.size();
    result.delivered = run.delivered;

    for (const auto& rec : run.records) {
        if (rec.kind != RoundKind::MessageRound) {
            auto& slot = result.checks[check_slot(rec.kind)];
            slot[0].add(*rec.check_passed);
            slot[*rec.check_basis == Basis::Z ? 1 : 2].add(*rec.check_passed);
            continue;
        }
        const auto [x, y] = *rec.announcement;
        const Bit i = *rec.alice_bit;
        const Bit j = *rec.bob_bit;
        const Bit k = *rec.charlie_bit;
        ++result.message_rounds;
        result.parity_ok += ((x ^ y) == (j ^ k)) ? 1 : 0;
        ++result.leak[16 * x + 8 * y + 4 * i + 2 * j + k];
    }

    const auto& d = run.decoded;
    for (std::size_t n = 0; n < run.delivered; ++n) {
        const Bit i = messages.alice[n];
        const Bit j = messages.bob[n];
        const Bit k = messages.charlie[n];
        result.correct_alice += (d.alice_j[n] == j) + (d.alice_k[n] == k);
        result.correct_bob += (d.bob_i[n] == i) + (d.bob_k[n] == k);
        result.correct_charlie += (d.charlie_i[n] == i) + (d.charlie_j[n] == j);
    }
    return result;
}

std::vector<TrialResult> run_trials(const ExperimentConfig& config) {
    std::vector<TrialResult> results(config.trials);
    const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
    if (workers == 1) {
        for (std::size_t t = 0; t < config.trials; ++t) {
            results[t] = run_trial(config, t);
        }
        return results;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = w; t < config.trials; t += workers) {
                    results[t] = run_trial(config, t);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

Proportion make_proportion(const Tally& t, std::optional<double> analytic) {
    Proportion p;
    p.checks_run = t.run;
    p.checks_failed = t.failed;
    p.estimate = t.run == 0 ? 0.0 : static_cast<double>(t.failed) / static_cast<double>(t.run);
    p.ci = stats::wilson_interval(t.failed, t.run);
    p.analytic = analytic;
    if (analytic && t.run > 0) {
        p.z_score = stats::z_score(p.estimate, *analytic, t.run);
    }
    return p;
}

CheckStats make_check_stats(const std::array<Tally, 3>& tallies, const AttackModel& attack, RoundKind kind) {
    std::optional<double> all;
    std::optional<double> z;
    std::optional<double> x;
    if (attack.kind() == AttackKind::None) {
        all = z = x = 0.0;
    } else {
        all = analytic_detection_probability(attack, kind);
        z = analytic_detection_probability(attack, kind, Basis::Z);
        x = analytic_detection_probability(attack, kind, Basis::X);
    }
    return {make_proportion(tallies[0], all), make_proportion(tallies[1], z), make_proportion(tallies[2], x)};
}

LeakageReport make_leakage(const std::array<std::uint64_t, 32>& leak, std::uint64_t rounds, std::uint64_t parity_ok) {
    LeakageReport report;
    report.rounds_audited = rounds;
    report.parity_identity_fraction = rounds == 0 ? 1.0 : static_cast<double>(parity_ok) / static_cast<double>(rounds);

    stats::JointCounts ann_i;
    stats::JointCounts ann_j;
    stats::JointCounts ann_k;
    stats::JointCounts parity;
    for (int idx = 0; idx < 32; ++idx) {
        const int x = (idx >> 4) & 1;
        const int y = (idx >> 3) & 1;
        const int i = (idx >> 2) & 1;
        const int j = (idx >> 1) & 1;
        const int k = idx & 1;
        if (leak[idx] == 0) {
            continue;
        }
        ann_i.add(2 * x + y, i, leak[idx]);
        ann_j.add(2 * x + y, j, leak[idx]);
        ann_k.add(2 * x + y, k, leak[idx]);
        parity.add(x ^ y, j ^ k, leak[idx]);
    }
    report.mi_announcement_alice = ann_i.mutual_information();
    report.mi_announcement_bob = ann_j.mutual_information();
    report.mi_announcement_charlie = ann_k.mutual_information();
    report.mi_parity = parity.mutual_information();
    return report;
}

} // namespace

void ExperimentConfig::validate() const {
    if (message_length < 1) {
        throw ConfigError("message_length", "must be >= 1");
    }
    if (trials < 1) {
        throw ConfigError("trials", "must be >= 1");
    }
    const std::pair<const char*, double> probs[] = {
        {"p_ab_check", schedule.p_ab_check}, {"p_bob_cm", schedule.p_bob_cm}, {"p_charlie_cm", schedule.p_charlie_cm}};
    for (const auto& [name, p] : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError(name, "must lie in [0, 1]");
        }
    }
    if (schedule.p_ab_check >= 1.0) {
        throw ConfigError("p_ab_check", "must be < 1 or no message round can ever run");
    }
    if ((1.0 - schedule.p_ab_check) * (1.0 - schedule.p_bob_cm) * (1.0 - schedule.p_charlie_cm) <= 0.0) {
        throw ConfigError("p_bob_cm", "schedule leaves no probability for message rounds");
    }
}

const CheckStats& DetectionReport::of(RoundKind kind) const {
    switch (kind) {
    case RoundKind::BobEavesdropCheck:
        return ab_check;
    case RoundKind::BobControlCheck:
        return ca_check;
    case RoundKind::CharlieDecoyCheck:
        return decoy_check;
    case RoundKind::MessageRound:
        break;
    }
    throw std::invalid_argument("message rounds have no detection statistics");
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto results = run_trials(config);

    CheckTallies checks{};
    std::array<std::uint64_t, 32> leak{};
    std::uint64_t parity_ok = 0;
    std::uint64_t message_rounds = 0;
    double fid_alice = 0.0;
    double fid_bob = 0.0;
    double fid_charlie = 0.0;
    double delivered = 0.0;
    const double bits_per_party = 2.0 * static_cast<double>(config.message_length);

    ExperimentReport report;
    report.seed = config.seed;
    report.message_length = config.message_length;
    report.attack = config.attack.describe();
    report.abort_policy = to_string(config.abort_policy);
    report.summary.trials = config.trials;

    for (std::size_t t = 0; t < results.size(); ++t) {
        const auto& r = results[t];
        for (std::size_t kind = 0; kind < 3; ++kind) {
            for (std::size_t b = 0; b < 3; ++b) {
                checks[kind][b].merge(r.checks[kind][b]);
            }
        }
        for (std::size_t idx = 0; idx < leak.size(); ++idx) {
            leak[idx] += r.leak[idx];
        }
        parity_ok += r.parity_ok;
        message_rounds += r.message_rounds;
        fid_alice += static_cast<double>(r.correct_alice) / bits_per_party;
        fid_bob += static_cast<double>(r.correct_bob) / bits_per_party;
        fid_charlie += static_cast<double>(r.correct_charlie) / bits_per_party;
        delivered += static_cast<double>(r.delivered) / static_cast<double>(config.message_length);
        report.summary.rounds += r.rounds;
        switch (r.status) {
        case RunStatus::Completed:
            ++report.summary.completed;
            break;
        case RunStatus::Aborted:
            ++report.summary.aborted;
            if (!report.summary.first_abort) {
                report.summary.first_abort = FirstAbort{t, r.abort->round, r.abort->check};
            }
            break;
        case RunStatus::Exhausted:
            ++report.summary.exhausted;
            break;
        }
    }

    const double trials = static_cast<double>(config.trials);
    report.fidelity = {fid_alice / trials, fid_bob / trials, fid_charlie / trials, delivered / trials};
    report.detection.ab_check = make_check_stats(checks[0], config.attack, kCheckKinds[0]);
    report.detection.ca_check = make_check_stats(checks[1], config.attack, kCheckKinds[1]);
    report.detection.decoy_check = make_check_stats(checks[2], config.attack, kCheckKinds[2]);
    report.detection.nominal = nominal_detection_probability(config.attack.kind());
    report.leakage = make_leakage(leak, message_rounds, parity_ok);
    return report;
}

OracleVerdict exhaustive_oracle() {
    OracleVerdict verdict;
    verdict.passed = true;
    RandomStream rng(0);
    for (Bit i = 0; i < 2; ++i) {
        for (Bit j = 0; j < 2; ++j) {
            for (Bit k = 0; k < 2; ++k) {
                const RoundRecord rec = simulate_message_round(i, j, k, rng);
                OracleRow row;
                row.i = i;
                row.j = j;
                row.k = k;
                row.bell = *rec.bell_outcome;
                std::tie(row.x, row.y) = *rec.announcement;
                row.alice = decode_alice(row.x, row.y, i);
                row.bob = decode_bob(row.x, row.y, j);
                row.charlie = decode_charlie(row.x, row.y, k);
                row.ok = row.alice == std::pair<Bit, Bit>{j, k} && row.bob == std::pair<Bit, Bit>{i, k} &&
                         row.charlie == std::pair<Bit, Bit>{i, j};
                if (!row.ok && verdict.passed) {
                    verdict.passed = false;
                    verdict.failing = std::array<Bit, 3>{i, j, k};
                }
                verdict.rows.push_back(row);
            }
        }
    }
    return verdict;
}

std::vector<CurveRow> detection_curve(const ExperimentConfig& base, std::span<const double> beta_sq_grid) {
    if (beta_sq_grid.empty()) {
        throw ConfigError("sweep.beta_sq", "grid must not be empty");
    }
    std::set<ChannelSegment> segments = base.attack.segments();
    if (segments.empty()) {
        segments = {ChannelSegment::AtoB, ChannelSegment::CtoA};
    }

    std::vector<CurveRow> rows;
    rows.reserve(beta_sq_grid.size());
    for (std::size_t p = 0; p < beta_sq_grid.size(); ++p) {
        const double beta_sq = beta_sq_grid[p];
        if (!(beta_sq >= 0.0 && beta_sq <= 1.0)) {
            throw ConfigError("sweep.beta_sq", "value " + std::to_string(beta_sq) + " outside [0, 1]");
        }
        ExperimentConfig config = base;
        config.attack = AttackModel::entangle_measure_beta_sq(beta_sq, segments)
                            .with_attack_probability(base.attack.attack_probability());
        config.abort_policy = AbortPolicy::RecordAndContinue;
        config.seed = RandomStream::derive(base.seed, p).next();
        const ExperimentReport report = run_experiment(config);
        rows.push_back({beta_sq, report.detection.ab_check, report.detection.decoy_check});
    }
    return rows;
}

std::string to_string(AbortPolicy policy) {
    return policy == AbortPolicy::Strict ? "strict" : "record_and_continue";
}

} // namespace qsdc
