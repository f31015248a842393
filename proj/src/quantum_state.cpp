#include "qsdc/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsdc/errors.hpp"

namespace qsdc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Probabilities this close to 0 or 1 are treated as exact before sampling.
constexpr double kProbabilityClamp = 1e-12;

constexpr std::array<Qubit, 3> kCanonicalOrder = {Qubit::Home, Qubit::Transit, Qubit::Ancilla};

bool is_canonical_subsequence(const std::vector<Qubit>& layout) {
    std::size_t cursor = 0;
    for (Qubit q : layout) {
        while (cursor < kCanonicalOrder.size() && kCanonicalOrder[cursor] != q) {
            ++cursor;
        }
        if (cursor == kCanonicalOrder.size()) {
            return false;
        }
        ++cursor;
    }
    return true;
}

using Vec2 = std::array<Amplitude, 2>;

Vec2 eigenvector(Basis basis, Bit outcome) {
    if (basis == Basis::Z) {
        return outcome == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    }
    return outcome == 0 ? Vec2{kInvSqrt2, kInvSqrt2} : Vec2{kInvSqrt2, -kInvSqrt2};
}

// Unnormalized projection of `target` onto the single-qubit vector v.
std::vector<Amplitude> project(const JointState& state, Qubit target, const Vec2& v) {
    const std::size_t mask = std::size_t{1} << state.shift_of(target);
    auto amps = state.amplitudes();
    std::vector<Amplitude> out(amps.size());
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (idx & mask) {
            continue;
        }
        const Amplitude a0 = amps[idx];
        const Amplitude a1 = amps[idx | mask];
        const Amplitude c = std::conj(v[0]) * a0 + std::conj(v[1]) * a1;
        out[idx] = v[0] * c;
        out[idx | mask] = v[1] * c;
    }
    return out;
}

double squared_norm(std::span<const Amplitude> amps) {
    double total = 0.0;
    for (const auto& a : amps) {
        total += std::norm(a);
    }
    return total;
}

double clamp_probability(double p) {
    if (p < kProbabilityClamp) {
        return 0.0;
    }
    if (p > 1.0 - kProbabilityClamp) {
        return 1.0;
    }
    return p;
}

std::vector<Amplitude> scaled(std::vector<Amplitude> amps, Amplitude factor) {
    for (auto& a : amps) {
        a *= factor;
    }
    return amps;
}

void require_bell_pair(const JointState& state) {
    if (state.layout() != std::vector<Qubit>{Qubit::Home, Qubit::Transit}) {
        throw StateError("Bell-basis operations need exactly the (home, transit) pair; "
                         "resolve any ancilla first");
    }
}

} // namespace

JointState::JointState(std::vector<Qubit> layout, std::vector<Amplitude> amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (layout_.empty() || !is_canonical_subsequence(layout_)) {
        throw StateError("qubit layout must be a non-empty subsequence of (home, transit, ancilla)");
    }
    if (amplitudes_.size() != (std::size_t{1} << layout_.size())) {
        throw StateError("expected " + std::to_string(std::size_t{1} << layout_.size()) +
                         " amplitudes, got " + std::to_string(amplitudes_.size()));
    }
    const double n2 = squared_norm(amplitudes_);
    if (!(std::abs(n2 - 1.0) <= kAmplitudeTolerance)) {
        throw StateError("state is not normalized (norm^2 = " + std::to_string(n2) + ")");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amplitudes_) {
        a *= inv;
    }
}

bool JointState::has(Qubit q) const {
    return std::find(layout_.begin(), layout_.end(), q) != layout_.end();
}

std::size_t JointState::shift_of(Qubit q) const {
    auto it = std::find(layout_.begin(), layout_.end(), q);
    if (it == layout_.end()) {
        throw StateError("state has no " + to_string(q) + " qubit");
    }
    return layout_.size() - 1 - static_cast<std::size_t>(it - layout_.begin());
}

double JointState::norm_squared() const {
    return squared_norm(amplitudes_);
}

Amplitude inner_product(const JointState& a, const JointState& b) {
    if (a.layout() != b.layout()) {
        throw StateError("inner product of states with different layouts");
    }
    Amplitude acc = 0.0;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

bool same_up_to_phase(const JointState& a, const JointState& b, double tol) {
    if (a.layout() != b.layout()) {
        return false;
    }
    const Amplitude overlap = inner_product(a, b);
    const double mag = std::abs(overlap);
    if (mag < 0.5) {
        return false;
    }
    // b ~ phase * a with phase = <a|b> / |<a|b>|
    const Amplitude phase = overlap / mag;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(y[i] - phase * x[i]) > tol) {
            return false;
        }
    }
    return true;
}

JointState bell_state(BellLabel label) {
    if (label.r > 1 || label.s > 1) {
        throw std::invalid_argument("Bell label bits must be 0 or 1");
    }
    const double h = kInvSqrt2;
    // Basis order |00>, |01>, |10>, |11> over (home, transit).
    std::vector<Amplitude> amps;
    if (label.r == 0 && label.s == 0) {
        amps = {0.0, h, h, 0.0};
    } else if (label.r == 1 && label.s == 0) {
        amps = {h, 0.0, 0.0, h};
    } else if (label.r == 0 && label.s == 1) {
        amps = {0.0, -h, h, 0.0};
    } else {
        amps = {h, 0.0, 0.0, -h};
    }
    return JointState({Qubit::Home, Qubit::Transit}, std::move(amps));
}

std::array<double, 4> bell_probabilities(const JointState& state) {
    require_bell_pair(state);
    std::array<double, 4> probs{};
    for (Bit r = 0; r < 2; ++r) {
        for (Bit s = 0; s < 2; ++s) {
            probs[2 * r + s] = std::norm(inner_product(bell_state({r, s}), state));
        }
    }
    return probs;
}

BellLabel identify_bell_state(const JointState& state) {
    const auto probs = bell_probabilities(state);
    const auto best = static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    return {static_cast<Bit>(best >> 1), static_cast<Bit>(best & 1)};
}

JointState apply_pauli(const JointState& state, Qubit target, Pauli op) {
    const std::size_t mask = std::size_t{1} << state.shift_of(target);
    std::vector<Amplitude> amps(state.amplitudes().begin(), state.amplitudes().end());
    switch (op) {
    case Pauli::I:
        break;
    case Pauli::X:
        for (std::size_t idx = 0; idx < amps.size(); ++idx) {
            if (!(idx & mask)) {
                std::swap(amps[idx], amps[idx | mask]);
            }
        }
        break;
    case Pauli::Z:
        for (std::size_t idx = 0; idx < amps.size(); ++idx) {
            if (idx & mask) {
                amps[idx] = -amps[idx];
            }
        }
        break;
    }
    return JointState(state.layout(), std::move(amps));
}

BellOutcome bell_measure(const JointState& state, RandomStream& rng) {
    const auto probs = bell_probabilities(state);
    const double total = probs[0] + probs[1] + probs[2] + probs[3];
    if (std::abs(total - 1.0) > kProbabilityClamp) {
        throw InvariantViolation("Bell probabilities sum to " + std::to_string(total));
    }

    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t chosen = 3;
    for (std::size_t i = 0; i < 4; ++i) {
        const double p = clamp_probability(probs[i]);
        if (p == 0.0) {
            continue;
        }
        cumulative += p;
        chosen = i;
        if (u < cumulative) {
            break;
        }
    }

    const BellLabel label{static_cast<Bit>(chosen >> 1), static_cast<Bit>(chosen & 1)};
    const JointState basis_state = bell_state(label);
    const Amplitude overlap = inner_product(basis_state, state);
    const Amplitude phase = overlap / std::abs(overlap);
    std::vector<Amplitude> collapsed(basis_state.amplitudes().begin(), basis_state.amplitudes().end());
    return {label, JointState(state.layout(), scaled(std::move(collapsed), phase))};
}

double outcome_probability(const JointState& state, Qubit target, Basis basis, Bit outcome) {
    return squared_norm(project(state, target, eigenvector(basis, outcome)));
}

QubitOutcome measure_qubit(const JointState& state, Qubit target, Basis basis, RandomStream& rng) {
    const double p0 = clamp_probability(outcome_probability(state, target, basis, 0));
    const Bit outcome = rng.uniform() < p0 ? 0 : 1;
    auto projected = project(state, target, eigenvector(basis, outcome));
    const double p = squared_norm(projected);
    return {outcome, JointState(state.layout(), scaled(std::move(projected), 1.0 / std::sqrt(p)))};
}

JointState prepare_decoy(DecoyState label) {
    const Vec2 v = eigenvector(decoy_basis(label), decoy_outcome(label));
    return JointState({Qubit::Transit}, {v[0], v[1]});
}

Basis decoy_basis(DecoyState label) {
    return (label == DecoyState::Zero || label == DecoyState::One) ? Basis::Z : Basis::X;
}

Bit decoy_outcome(DecoyState label) {
    return (label == DecoyState::One || label == DecoyState::Minus) ? 1 : 0;
}

JointState attach_ancilla_and_entangle(const JointState& state, Amplitude alpha, Amplitude beta) {
    const double weight = std::norm(alpha) + std::norm(beta);
    if (!(std::abs(weight - 1.0) <= kAmplitudeTolerance)) {
        throw std::invalid_argument("entangling amplitudes violate |alpha|^2 + |beta|^2 = 1 (got " +
                                    std::to_string(weight) + ")");
    }
    if (state.has_ancilla()) {
        throw StateError("an ancilla is already attached");
    }

    std::vector<Qubit> layout = state.layout();
    layout.push_back(Qubit::Ancilla);
    const std::size_t transit_mask = std::size_t{1} << state.shift_of(Qubit::Transit);

    auto amps = state.amplitudes();
    std::vector<Amplitude> out(amps.size() * 2);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        // Ancilla is the new least significant bit; transit moves up by one.
        out[idx << 1] += alpha * amps[idx];
        out[((idx ^ transit_mask) << 1) | 1] += beta * amps[idx];
    }

    const double before = squared_norm(amps);
    const double after = squared_norm(out);
    if (std::abs(after - before) > kAmplitudeTolerance) {
        throw InvariantViolation("entangling map did not preserve the norm");
    }
    return JointState(std::move(layout), std::move(out));
}

JointState discard_qubit(const JointState& state, Qubit target) {
    if (state.qubit_count() < 2) {
        throw StateError("cannot discard the only qubit of a state");
    }
    const double p1 = outcome_probability(state, target, Basis::Z, 1);
    Bit value = 0;
    if (p1 > 1.0 - kProbabilityClamp) {
        value = 1;
    } else if (p1 >= kProbabilityClamp) {
        throw StateError(to_string(target) + " qubit is not in a definite basis state");
    }

    const std::size_t shift = state.shift_of(target);
    const std::size_t low_mask = (std::size_t{1} << shift) - 1;
    auto amps = state.amplitudes();
    std::vector<Amplitude> out(amps.size() / 2);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const std::size_t full = ((idx & ~low_mask) << 1) | (std::size_t{value} << shift) | (idx & low_mask);
        out[idx] = amps[full];
    }

    std::vector<Qubit> layout;
    for (Qubit q : state.layout()) {
        if (q != target) {
            layout.push_back(q);
        }
    }
    return JointState(std::move(layout), std::move(out));
}

std::string to_string(Qubit q) {
    switch (q) {
    case Qubit::Home:
        return "home";
    case Qubit::Transit:
        return "transit";
    case Qubit::Ancilla:
        return "ancilla";
    }
    return "?";
}

std::string to_string(Basis b) {
    return b == Basis::Z ? "Z" : "X";
}

std::string to_string(Pauli p) {
    switch (p) {
    case Pauli::I:
        return "I";
    case Pauli::X:
        return "X";
    case Pauli::Z:
        return "Z";
    }
    return "?";
}

std::string to_string(DecoyState d) {
    switch (d) {
    case DecoyState::Zero:
        return "|0>";
    case DecoyState::One:
        return "|1>";
    case DecoyState::Plus:
        return "|+>";
    case DecoyState::Minus:
        return "|->";
    }
    return "?";
}

std::string to_string(BellLabel label) {
    return "Psi_" + std::to_string(label.r) + std::to_string(label.s);
}

} // namespace qsdc
