#pragma once

// Three-party round state machine. Alice prepares |Psi_00>, the transit qubit
// travels A -> B -> C -> A, Bob and Charlie either encode (message mode) or
// sacrifice the round to a check, and Alice's Bell measurement plus the public
// announcement (x, y) lets every party decode the other two bits.

#include <cstddef>
#include <optional>
#include <vector>

#include "qsdc/adversary.hpp"
#include "qsdc/protocol_types.hpp"
#include "qsdc/quantum_state.hpp"
#include "qsdc/random_stream.hpp"

namespace qsdc {

/// Secrets i (Alice), j (Bob), k (Charlie); equal length N >= 1.
struct MessageTriple {
    std::vector<Bit> alice;
    std::vector<Bit> bob;
    std::vector<Bit> charlie;

    std::size_t size() const { return alice.size(); }

    /// Throws std::invalid_argument on empty, unequal or non-binary input.
    void validate() const;

    static MessageTriple random(std::size_t n, RandomStream& rng);
    static MessageTriple zeros(std::size_t n);
};

/// Independent Bernoulli choices for Bob's check, Bob's control mode and
/// Charlie's control mode (decoy).
struct SchedulePolicy {
    double p_ab_check = 0.25;
    double p_bob_cm = 0.25;
    double p_charlie_cm = 0.25;
    /// Round budget; 0 selects 1000 + 100 * N.
    std::size_t max_rounds = 0;

    void validate() const;
    std::size_t round_budget(std::size_t n) const;
};

enum class AbortPolicy { Strict, RecordAndContinue };

struct RoundRecord {
    std::size_t round = 0;
    RoundKind kind = RoundKind::MessageRound;
    std::optional<std::size_t> message_index;
    std::optional<Bit> alice_bit;
    std::optional<Bit> bob_bit;
    std::optional<Bit> charlie_bit;
    std::optional<BellLabel> bell_outcome;
    std::optional<std::pair<Bit, Bit>> announcement;
    std::optional<bool> check_passed;
    /// Basis used by the check (for decoys: the basis of the revealed state).
    std::optional<Basis> check_basis;
    std::optional<DecoyState> decoy;
    std::vector<ChannelSegment> attack_touched;

    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// Each party's view of the other two message streams.
struct DecodedMessages {
    std::vector<Bit> alice_j, alice_k;
    std::vector<Bit> bob_i, bob_k;
    std::vector<Bit> charlie_i, charlie_j;
};

enum class RunStatus { Completed, Aborted, Exhausted };

struct AbortInfo {
    std::size_t round = 0;
    RoundKind check = RoundKind::BobEavesdropCheck;
    std::vector<ChannelSegment> segments;  // segments the failed check observes
};

struct ProtocolRun {
    RunStatus status = RunStatus::Completed;
    std::vector<RoundRecord> records;
    PublicTranscript transcript;
    std::vector<EveRecord> eve_log;
    /// Decodes of every delivered message round, in message order.
    DecodedMessages decoded;
    std::optional<AbortInfo> abort;
    std::size_t delivered = 0;
};

struct CheckResult {
    bool passed = true;
    Basis basis = Basis::Z;
    Bit first_outcome = 0;   // the party holding the transit qubit
    Bit second_outcome = 0;  // Alice
    std::vector<TranscriptEvent> events;
    /// State after the checkers' measurements (still carries any ancilla).
    std::optional<JointState> collapsed;
};

Pauli encode_bob(Bit j);
Pauli encode_charlie(Bit k);

/// Alice's public pair: x = r XOR i, y = s XOR i.
std::pair<Bit, Bit> announce(Bit r, Bit s, Bit i);

/// Returns (j, k).
std::pair<Bit, Bit> decode_alice(Bit x, Bit y, Bit i);
/// Returns (i, k).
std::pair<Bit, Bit> decode_bob(Bit x, Bit y, Bit j);
/// Returns (i, j).
std::pair<Bit, Bit> decode_charlie(Bit x, Bit y, Bit k);

/// Bob measures the transit qubit in a random basis and discloses basis and
/// outcome; Alice measures home in the same basis. Passes when Z outcomes
/// differ or X outcomes agree.
CheckResult run_ab_check(const JointState& state, RandomStream& rng);

/// Same correlation test between Charlie (transit) and Alice (home).
CheckResult run_ca_check(const JointState& state, RandomStream& rng);

/// Charlie reveals the decoy; Alice measures in its basis and passes when the
/// outcome names the revealed state.
CheckResult run_decoy_check(DecoyState decoy, const JointState& received, RandomStream& rng);

/// One unattacked message round for secrets (i, j, k).
RoundRecord simulate_message_round(Bit i, Bit j, Bit k, RandomStream& rng);

ProtocolRun run_protocol(const MessageTriple& messages, const SchedulePolicy& schedule, AbortPolicy abort_policy,
                         const AttackModel& attack, RandomStream& rng);

std::string to_string(RunStatus status);

} // namespace qsdc
