#include "qsdc/protocol.hpp"

#include <stdexcept>

#include "qsdc/errors.hpp"

namespace qsdc {

namespace {

using Kind = TranscriptEvent::Kind;

TranscriptEvent event(Party speaker, Kind kind) {
    TranscriptEvent e;
    e.speaker = speaker;
    e.kind = kind;
    return e;
}

TranscriptEvent mode_event(Party speaker, RunningMode mode) {
    auto e = event(speaker, Kind::ModeAnnouncement);
    e.mode = mode;
    return e;
}

CheckResult correlation_check(const JointState& state, Party checker, RandomStream& rng) {
    CheckResult result;
    result.basis = rng.bit() ? Basis::X : Basis::Z;
    auto first = measure_qubit(state, Qubit::Transit, result.basis, rng);
    auto second = measure_qubit(first.state, Qubit::Home, result.basis, rng);
    result.first_outcome = first.outcome;
    result.second_outcome = second.outcome;
    // |Psi_00> is anti-correlated in Z and correlated in X.
    result.passed = result.basis == Basis::Z ? first.outcome != second.outcome : first.outcome == second.outcome;
    result.collapsed = std::move(second.state);

    auto report = event(checker, Kind::MeasurementReport);
    report.basis = result.basis;
    report.outcome = first.outcome;
    result.events.push_back(report);
    auto verdict = event(Party::Alice, Kind::CheckVerdict);
    verdict.passed = result.passed;
    result.events.push_back(verdict);
    return result;
}

// Alice's Bell measurement and announcement; fills the message fields of `rec`.
void complete_message_round(const JointState& state, Bit i, Bit j, Bit k, RandomStream& rng, RoundRecord& rec) {
    auto measured = bell_measure(state, rng);
    rec.kind = RoundKind::MessageRound;
    rec.alice_bit = i;
    rec.bob_bit = j;
    rec.charlie_bit = k;
    rec.bell_outcome = measured.label;
    rec.announcement = announce(measured.label.r, measured.label.s, i);
}

void require_bit(Bit b, const char* what) {
    if (b > 1) {
        throw std::invalid_argument(std::string(what) + " must be 0 or 1");
    }
}

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

} // namespace

void MessageTriple::validate() const {
    if (alice.empty()) {
        throw std::invalid_argument("messages must have length >= 1");
    }
    if (bob.size() != alice.size() || charlie.size() != alice.size()) {
        throw std::invalid_argument("all three messages must have the same length");
    }
    for (const auto* bits : {&alice, &bob, &charlie}) {
        for (Bit b : *bits) {
            require_bit(b, "message bit");
        }
    }
}

MessageTriple MessageTriple::random(std::size_t n, RandomStream& rng) {
    MessageTriple m;
    m.alice.reserve(n);
    m.bob.reserve(n);
    m.charlie.reserve(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        m.alice.push_back(rng.bit());
        m.bob.push_back(rng.bit());
        m.charlie.push_back(rng.bit());
    }
    return m;
}

MessageTriple MessageTriple::zeros(std::size_t n) {
    return {std::vector<Bit>(n, 0), std::vector<Bit>(n, 0), std::vector<Bit>(n, 0)};
}

void SchedulePolicy::validate() const {
    require_probability(p_ab_check, "p_ab_check");
    require_probability(p_bob_cm, "p_bob_cm");
    require_probability(p_charlie_cm, "p_charlie_cm");
}

std::size_t SchedulePolicy::round_budget(std::size_t n) const {
    return max_rounds != 0 ? max_rounds : 1000 + 100 * n;
}

Pauli encode_bob(Bit j) {
    require_bit(j, "j");
    return j == 0 ? Pauli::I : Pauli::X;
}

Pauli encode_charlie(Bit k) {
    require_bit(k, "k");
    return k == 0 ? Pauli::I : Pauli::Z;
}

std::pair<Bit, Bit> announce(Bit r, Bit s, Bit i) {
    return {static_cast<Bit>(r ^ i), static_cast<Bit>(s ^ i)};
}

std::pair<Bit, Bit> decode_alice(Bit x, Bit y, Bit i) {
    return {static_cast<Bit>(x ^ i), static_cast<Bit>(y ^ i)};
}

std::pair<Bit, Bit> decode_bob(Bit x, Bit y, Bit j) {
    return {static_cast<Bit>(x ^ j), static_cast<Bit>(x ^ y ^ j)};
}

std::pair<Bit, Bit> decode_charlie(Bit x, Bit y, Bit k) {
    return {static_cast<Bit>(y ^ k), static_cast<Bit>(x ^ y ^ k)};
}

CheckResult run_ab_check(const JointState& state, RandomStream& rng) {
    return correlation_check(state, Party::Bob, rng);
}

CheckResult run_ca_check(const JointState& state, RandomStream& rng) {
    return correlation_check(state, Party::Charlie, rng);
}

CheckResult run_decoy_check(DecoyState decoy, const JointState& received, RandomStream& rng) {
    CheckResult result;
    result.basis = decoy_basis(decoy);
    result.first_outcome = decoy_outcome(decoy);
    auto measured = measure_qubit(received, Qubit::Transit, result.basis, rng);
    result.second_outcome = measured.outcome;
    result.passed = measured.outcome == result.first_outcome;
    result.collapsed = std::move(measured.state);

    auto reveal = event(Party::Charlie, Kind::DecoyReveal);
    reveal.decoy = decoy;
    result.events.push_back(reveal);
    auto verdict = event(Party::Alice, Kind::CheckVerdict);
    verdict.passed = result.passed;
    result.events.push_back(verdict);
    return result;
}

RoundRecord simulate_message_round(Bit i, Bit j, Bit k, RandomStream& rng) {
    RoundRecord rec;
    rec.message_index = 0;
    JointState state = bell_state({0, 0});
    state = apply_pauli_on_transit(state, encode_bob(j));
    state = apply_pauli_on_transit(state, encode_charlie(k));
    complete_message_round(state, i, j, k, rng, rec);
    return rec;
}

ProtocolRun run_protocol(const MessageTriple& messages, const SchedulePolicy& schedule, AbortPolicy abort_policy,
                         const AttackModel& attack, RandomStream& rng) {
    messages.validate();
    schedule.validate();

    ProtocolRun run;
    const std::size_t n_total = messages.size();
    const std::size_t budget = schedule.round_budget(n_total);

    for (std::size_t round = 0; run.delivered < n_total; ++round) {
        if (round == budget) {
            run.status = RunStatus::Exhausted;
            return run;
        }

        const std::size_t n = run.delivered;
        const Bit i = messages.alice[n];
        const Bit j = messages.bob[n];
        const Bit k = messages.charlie[n];

        RoundRecord rec;
        rec.round = round;
        std::vector<TranscriptEvent> events;
        std::vector<EveRecord> eve_round;

        auto pending_ancilla = [&]() -> EveRecord* {
            for (auto it = eve_round.rbegin(); it != eve_round.rend(); ++it) {
                if (it->kind == AttackKind::EntangleMeasure && !it->ancilla_outcome) {
                    return &*it;
                }
            }
            return nullptr;
        };
        auto record_attack = [&](std::optional<EveRecord> eve, ChannelSegment seg) {
            if (eve) {
                eve->round = round;
                eve_round.push_back(*eve);
                rec.attack_touched.push_back(seg);
            }
        };
        auto resolve = [&](const JointState& s) {
            EveRecord* pending = pending_ancilla();
            return pending ? resolve_ancilla(s, *pending, rng) : s;
        };
        auto send = [&](const JointState& s, ChannelSegment seg) {
            auto res = attack_transit(attack, seg, s, rng, pending_ancilla());
            record_attack(res.eve, seg);
            return res.state;
        };

        // S1: Alice keeps h, sends t to Bob.
        JointState state = send(bell_state({0, 0}), ChannelSegment::AtoB);

        bool check_round = false;
        if (rng.bernoulli(schedule.p_ab_check)) {
            // S2.1: Bob measures instead of encoding.
            rec.kind = RoundKind::BobEavesdropCheck;
            events.push_back(mode_event(Party::Bob, RunningMode::Check));
            auto check = run_ab_check(state, rng);
            rec.check_passed = check.passed;
            rec.check_basis = check.basis;
            events.insert(events.end(), check.events.begin(), check.events.end());
            resolve(*check.collapsed);
            check_round = true;
        } else {
            // S2.2: Bob picks control or message mode, then forwards to Charlie.
            const bool bob_cm = rng.bernoulli(schedule.p_bob_cm);
            if (!bob_cm) {
                state = apply_pauli_on_transit(state, encode_bob(j));
                rec.bob_bit = j;
            }
            state = send(state, ChannelSegment::BtoC);
            events.push_back(event(Party::Charlie, Kind::Receipt));
            events.push_back(mode_event(Party::Bob, bob_cm ? RunningMode::Control : RunningMode::Message));

            if (bob_cm) {
                // S3.1
                rec.kind = RoundKind::BobControlCheck;
                auto check = run_ca_check(state, rng);
                rec.check_passed = check.passed;
                rec.check_basis = check.basis;
                events.insert(events.end(), check.events.begin(), check.events.end());
                resolve(*check.collapsed);
                check_round = true;
            } else if (rng.bernoulli(schedule.p_charlie_cm)) {
                // S3.2.2: the encoded pair is dropped and a decoy goes to Alice.
                resolve(state);
                rec.kind = RoundKind::CharlieDecoyCheck;
                const auto decoy = static_cast<DecoyState>(rng.below(4));
                auto res = attack_decoy(attack, prepare_decoy(decoy), rng);
                record_attack(res.eve, ChannelSegment::CtoA);
                events.push_back(event(Party::Alice, Kind::Receipt));
                events.push_back(mode_event(Party::Charlie, RunningMode::Control));
                auto check = run_decoy_check(decoy, res.state, rng);
                rec.decoy = decoy;
                rec.check_passed = check.passed;
                rec.check_basis = check.basis;
                events.insert(events.end(), check.events.begin(), check.events.end());
                resolve(*check.collapsed);
                check_round = true;
            } else {
                // S3.2.1 and S4.2
                state = apply_pauli_on_transit(state, encode_charlie(k));
                state = send(state, ChannelSegment::CtoA);
                events.push_back(event(Party::Alice, Kind::Receipt));
                events.push_back(mode_event(Party::Charlie, RunningMode::Message));
                state = resolve(state);
                complete_message_round(state, i, j, k, rng, rec);
                rec.message_index = n;

                auto ann = event(Party::Alice, Kind::Announcement);
                ann.announcement = rec.announcement;
                events.push_back(ann);

                const auto [x, y] = *rec.announcement;
                for (auto& eve : eve_round) {
                    eve.guess_j_xor_k = static_cast<Bit>(x ^ y);
                }
                const auto [aj, ak] = decode_alice(x, y, i);
                const auto [bi, bk] = decode_bob(x, y, j);
                const auto [ci, cj] = decode_charlie(x, y, k);
                if (rec.attack_touched.empty() && bi != ci) {
                    throw InvariantViolation("Bob and Charlie decoded different values of i in an untouched round");
                }
                auto& d = run.decoded;
                d.alice_j.push_back(aj);
                d.alice_k.push_back(ak);
                d.bob_i.push_back(bi);
                d.bob_k.push_back(bk);
                d.charlie_i.push_back(ci);
                d.charlie_j.push_back(cj);
                ++run.delivered;
            }
        }

        run.transcript.append(std::move(events), round);
        run.eve_log.insert(run.eve_log.end(), eve_round.begin(), eve_round.end());
        const bool failed = check_round && !*rec.check_passed;
        const RoundKind kind = rec.kind;
        run.records.push_back(std::move(rec));

        if (failed && abort_policy == AbortPolicy::Strict) {
            run.status = RunStatus::Aborted;
            run.abort = AbortInfo{round, kind, observed_segments(kind)};
            return run;
        }
    }
    run.status = RunStatus::Completed;
    return run;
}

std::string to_string(RunStatus status) {
    switch (status) {
    case RunStatus::Completed:
        return "completed";
    case RunStatus::Aborted:
        return "aborted";
    case RunStatus::Exhausted:
        return "exhausted";
    }
    return "?";
}

} // namespace qsdc
