#pragma once

// Exact state-vector model of one protocol round: Alice's home qubit, the
// transit qubit that travels A -> B -> C -> A, and an optional two-level
// ancilla belonging to the eavesdropper.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsdc/random_stream.hpp"

namespace qsdc {

using Amplitude = std::complex<double>;
using Bit = std::uint8_t;

/// Absolute tolerance for amplitude comparisons and normalization checks.
inline constexpr double kAmplitudeTolerance = 1e-9;

enum class Qubit { Home, Transit, Ancilla };

/// Measurement basis. Outcome 0 is |0> for Z and |+> for X.
enum class Basis { Z, X };

enum class Pauli { I, X, Z };

enum class DecoyState { Zero, One, Plus, Minus };

/// Names the Bell state |Psi_rs>: r is the bit-flip index, s the phase-flip index.
struct BellLabel {
    Bit r = 0;
    Bit s = 0;

    friend bool operator==(const BellLabel&, const BellLabel&) = default;
};

/// Normalized amplitude vector over an ordered set of qubits.
///
/// Basis index ordering is lexicographic over the layout with |0> before |1>,
/// so the first qubit in the layout is the most significant bit. Layouts are
/// always a subsequence of (Home, Transit, Ancilla): a decoy round carries
/// only (Transit) or (Transit, Ancilla).
class JointState {
public:
    /// Throws StateError when the layout is not a valid subsequence, the
    /// amplitude count is not 2^qubits, or the norm is off by more than
    /// kAmplitudeTolerance. The stored vector is rescaled to unit norm.
    JointState(std::vector<Qubit> layout, std::vector<Amplitude> amplitudes);

    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    const std::vector<Qubit>& layout() const { return layout_; }

    std::size_t qubit_count() const { return layout_.size(); }
    std::size_t dimension() const { return amplitudes_.size(); }

    bool has(Qubit q) const;
    bool has_ancilla() const { return has(Qubit::Ancilla); }

    /// Bit shift of `q` inside a basis index. Throws StateError if absent.
    std::size_t shift_of(Qubit q) const;

    double norm_squared() const;

private:
    std::vector<Qubit> layout_;
    std::vector<Amplitude> amplitudes_;
};

/// Inner product <a|b>. Layouts must match.
Amplitude inner_product(const JointState& a, const JointState& b);

/// True when a and b describe the same ray (equal up to global phase).
bool same_up_to_phase(const JointState& a, const JointState& b, double tol = kAmplitudeTolerance);

JointState bell_state(BellLabel label);

/// Label with the largest overlap. Ties are resolved towards the lower index.
BellLabel identify_bell_state(const JointState& state);

/// |<Psi_rs|state>|^2 indexed by 2*r + s. State must be (Home, Transit).
std::array<double, 4> bell_probabilities(const JointState& state);

JointState apply_pauli(const JointState& state, Qubit target, Pauli op);

inline JointState apply_pauli_on_transit(const JointState& state, Pauli op) {
    return apply_pauli(state, Qubit::Transit, op);
}

struct BellOutcome {
    BellLabel label;
    JointState state;
};

/// Projective measurement in the Bell basis of (home, transit). Throws
/// StateError if any other subsystem is still attached.
BellOutcome bell_measure(const JointState& state, RandomStream& rng);

/// Probability that measuring `target` in `basis` yields `outcome`.
double outcome_probability(const JointState& state, Qubit target, Basis basis, Bit outcome);

struct QubitOutcome {
    Bit outcome;
    JointState state;
};

/// Projective single-qubit measurement; the state collapses and is renormalized.
QubitOutcome measure_qubit(const JointState& state, Qubit target, Basis basis, RandomStream& rng);

/// Single-qubit state with only the transit slot populated.
JointState prepare_decoy(DecoyState label);

Basis decoy_basis(DecoyState label);

/// Measurement outcome that identifies `label` in its own basis.
Bit decoy_outcome(DecoyState label);

/// Couples a fresh ancilla to the transit qubit:
///   |0>_t|chi> -> alpha|0>_t|chi_0> + beta|1>_t|chi_1>
///   |1>_t|chi> -> alpha|1>_t|chi_0> + beta|0>_t|chi_1>
/// The ancilla is appended as the last qubit with chi_0 = |0>, chi_1 = |1>.
/// Throws std::invalid_argument if |alpha|^2 + |beta|^2 differs from 1 by more
/// than kAmplitudeTolerance, StateError if an ancilla is already attached.
JointState attach_ancilla_and_entangle(const JointState& state, Amplitude alpha, Amplitude beta);

/// Removes a qubit that is in a definite computational basis state (for
/// example right after a Z measurement). Throws StateError otherwise.
JointState discard_qubit(const JointState& state, Qubit target);

std::string to_string(Qubit q);
std::string to_string(Basis b);
std::string to_string(Pauli p);
std::string to_string(DecoyState d);
std::string to_string(BellLabel label);

} // namespace qsdc
