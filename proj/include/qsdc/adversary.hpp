#pragma once

// Eavesdropper strategies on the three quantum channel segments.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qsdc/protocol_types.hpp"
#include "qsdc/quantum_state.hpp"
#include "qsdc/random_stream.hpp"

namespace qsdc {

enum class AttackKind { None, InterceptResend, Disturbance, EntangleMeasure };

/// Which attack Eve runs and where. Construct through the named factories;
/// they enforce the invariants (non-empty segments for real attacks,
/// normalized entangling amplitudes, X or Z for disturbance).
class AttackModel {
public:
    AttackModel() = default;

    static AttackModel none();
    static AttackModel intercept_resend(std::set<ChannelSegment> segments);
    static AttackModel disturbance(Pauli pauli, std::set<ChannelSegment> segments);
    static AttackModel entangle_measure(Amplitude alpha, Amplitude beta, std::set<ChannelSegment> segments);

    /// Real amplitudes alpha = sqrt(1 - beta_sq), beta = sqrt(beta_sq).
    static AttackModel entangle_measure_beta_sq(double beta_sq, std::set<ChannelSegment> segments);

    /// Per-round probability that Eve acts when a qubit passes; defaults to 1.
    AttackModel with_attack_probability(double p) const;

    AttackKind kind() const { return kind_; }
    const std::set<ChannelSegment>& segments() const { return segments_; }
    bool covers(ChannelSegment segment) const { return segments_.count(segment) != 0; }
    Pauli pauli() const { return pauli_; }
    Amplitude alpha() const { return alpha_; }
    Amplitude beta() const { return beta_; }
    double attack_probability() const { return attack_probability_; }

    std::string describe() const;

    friend bool operator==(const AttackModel&, const AttackModel&) = default;

private:
    AttackKind kind_ = AttackKind::None;
    std::set<ChannelSegment> segments_;
    Pauli pauli_ = Pauli::I;
    Amplitude alpha_ = 1.0;
    Amplitude beta_ = 0.0;
    double attack_probability_ = 1.0;
};

/// What Eve did and saw in one round on one segment.
struct EveRecord {
    std::size_t round = 0;
    ChannelSegment segment = ChannelSegment::AtoB;
    AttackKind kind = AttackKind::None;
    std::optional<Basis> basis;         // intercept-resend basis
    std::optional<Bit> outcome;         // intercept-resend outcome
    std::optional<Bit> ancilla_outcome; // 0 = chi_0, 1 = chi_1
    std::optional<Bit> guess_j_xor_k;   // parity read off the announcement

    friend bool operator==(const EveRecord&, const EveRecord&) = default;
};

struct AttackResult {
    JointState state;
    std::optional<EveRecord> eve;  // empty when the attack did not fire
};

/// Eve's action on the transit qubit of a (home, transit) pair passing
/// `segment`. Identity when the segment is not covered.
///
/// If an earlier segment already left an ancilla attached, that ancilla is
/// measured and discarded first (its outcome is written to `pending`) so that
/// at most one ancilla is attached at a time.
AttackResult attack_transit(const AttackModel& model, ChannelSegment segment, const JointState& state,
                            RandomStream& rng, EveRecord* pending = nullptr);

/// Eve's action on a lone decoy qubit on C -> A.
AttackResult attack_decoy(const AttackModel& model, const JointState& state, RandomStream& rng);

/// Measures Eve's ancilla in the {chi_0, chi_1} basis, records the outcome and
/// removes the ancilla from the state. No-op when no ancilla is attached.
JointState resolve_ancilla(const JointState& state, EveRecord& record, RandomStream& rng);

/// Exact detection probability of a single check of `check_kind`.
///
/// Every supported attack acts on the transit qubit as a Pauli channel
/// (probabilities of I, X, Y, Z). A Z-basis check or Z-family decoy fails on an
/// X or Y error, an X-basis check or X-family decoy on a Z or Y error, and both
/// bases are equally likely, so
///   P(detect) = (P(X) + P(Y)) / 2 + (P(Z) + P(Y)) / 2
/// where the channel is composed over the segments the check observes.
///
/// Throws std::invalid_argument for AttackKind::None or RoundKind::MessageRound.
double analytic_detection_probability(const AttackModel& model, RoundKind check_kind);

/// Same, conditioned on the check basis (for decoy checks: the decoy family).
double analytic_detection_probability(const AttackModel& model, RoundKind check_kind, Basis basis);

/// Detection probability the security argument quotes for this attack family
/// (1/2 for intercept-resend and disturbance), empty for other kinds.
std::optional<double> nominal_detection_probability(AttackKind kind);

/// Eve's transcript-only inference: the parity j XOR k of every message round.
std::vector<std::pair<std::size_t, Bit>> infer_parities(const PublicTranscript& transcript);

std::string to_string(AttackKind kind);

} // namespace qsdc
