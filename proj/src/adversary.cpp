#include "qsdc/adversary.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsdc/errors.hpp"

namespace qsdc {

namespace {

void require_segments(const std::set<ChannelSegment>& segments) {
    if (segments.empty()) {
        throw std::invalid_argument("an attack needs at least one channel segment");
    }
}

bool fires(const AttackModel& model, RandomStream& rng) {
    // Only draw when the knob is in use so the default stream is unchanged.
    return model.attack_probability() >= 1.0 || rng.bernoulli(model.attack_probability());
}

// Pauli channel weights indexed by 2 * x_flip + z_flip: I, Z, X, Y.
using PauliChannel = std::array<double, 4>;

constexpr PauliChannel kIdentityChannel = {1.0, 0.0, 0.0, 0.0};

PauliChannel channel_of(const AttackModel& model) {
    PauliChannel ch{};
    switch (model.kind()) {
    case AttackKind::None:
        return kIdentityChannel;
    case AttackKind::Disturbance:
        ch[model.pauli() == Pauli::X ? 2 : 1] = 1.0;
        break;
    case AttackKind::InterceptResend:
        // Z-basis measurement dephases (Z error w.p. 1/2), X-basis measurement
        // bit-flips (X error w.p. 1/2); each basis is picked half the time.
        ch = {0.5, 0.25, 0.25, 0.0};
        break;
    case AttackKind::EntangleMeasure:
        // Tracing out the ancilla leaves |alpha|^2 I + |beta|^2 X.
        ch = {std::norm(model.alpha()), 0.0, std::norm(model.beta()), 0.0};
        break;
    }
    const double q = model.attack_probability();
    for (auto& w : ch) {
        w *= q;
    }
    ch[0] += 1.0 - q;
    return ch;
}

PauliChannel compose(const PauliChannel& a, const PauliChannel& b) {
    PauliChannel out{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            out[i ^ j] += a[i] * b[j];
        }
    }
    return out;
}

AttackResult act_on_transit(const AttackModel& model, ChannelSegment segment, const JointState& state,
                            RandomStream& rng) {
    EveRecord eve;
    eve.segment = segment;
    eve.kind = model.kind();
    switch (model.kind()) {
    case AttackKind::None:
        return {state, std::nullopt};
    case AttackKind::InterceptResend: {
        const Basis basis = rng.bit() ? Basis::X : Basis::Z;
        // After the projective measurement the transit slot already holds the
        // eigenstate matching Eve's outcome, which is what she resends.
        auto measured = measure_qubit(state, Qubit::Transit, basis, rng);
        eve.basis = basis;
        eve.outcome = measured.outcome;
        return {std::move(measured.state), eve};
    }
    case AttackKind::Disturbance:
        return {apply_pauli_on_transit(state, model.pauli()), eve};
    case AttackKind::EntangleMeasure:
        return {attach_ancilla_and_entangle(state, model.alpha(), model.beta()), eve};
    }
    return {state, std::nullopt};
}

} // namespace

AttackModel AttackModel::none() {
    return AttackModel{};
}

AttackModel AttackModel::intercept_resend(std::set<ChannelSegment> segments) {
    require_segments(segments);
    AttackModel m;
    m.kind_ = AttackKind::InterceptResend;
    m.segments_ = std::move(segments);
    return m;
}

AttackModel AttackModel::disturbance(Pauli pauli, std::set<ChannelSegment> segments) {
    require_segments(segments);
    if (pauli == Pauli::I) {
        throw std::invalid_argument("disturbance attack needs Pauli X or Z");
    }
    AttackModel m;
    m.kind_ = AttackKind::Disturbance;
    m.segments_ = std::move(segments);
    m.pauli_ = pauli;
    return m;
}

AttackModel AttackModel::entangle_measure(Amplitude alpha, Amplitude beta, std::set<ChannelSegment> segments) {
    require_segments(segments);
    const double weight = std::norm(alpha) + std::norm(beta);
    if (!(std::abs(weight - 1.0) <= kAmplitudeTolerance)) {
        throw std::invalid_argument("entangle-and-measure requires |alpha|^2 + |beta|^2 = 1");
    }
    AttackModel m;
    m.kind_ = AttackKind::EntangleMeasure;
    m.segments_ = std::move(segments);
    m.alpha_ = alpha;
    m.beta_ = beta;
    return m;
}

AttackModel AttackModel::entangle_measure_beta_sq(double beta_sq, std::set<ChannelSegment> segments) {
    if (!(beta_sq >= 0.0 && beta_sq <= 1.0)) {
        throw std::invalid_argument("beta_sq must lie in [0, 1]");
    }
    return entangle_measure(std::sqrt(1.0 - beta_sq), std::sqrt(beta_sq), std::move(segments));
}

AttackModel AttackModel::with_attack_probability(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("attack probability must lie in [0, 1]");
    }
    AttackModel m = *this;
    m.attack_probability_ = p;
    return m;
}

std::string AttackModel::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ == AttackKind::Disturbance) {
        os << "(" << to_string(pauli_) << ")";
    } else if (kind_ == AttackKind::EntangleMeasure) {
        os << "(|beta|^2=" << std::norm(beta_) << ")";
    }
    if (!segments_.empty()) {
        os << " on";
        for (auto s : segments_) {
            os << " " << to_string(s);
        }
    }
    if (attack_probability_ < 1.0) {
        os << " with p=" << attack_probability_;
    }
    return os.str();
}

AttackResult attack_transit(const AttackModel& model, ChannelSegment segment, const JointState& state,
                            RandomStream& rng, EveRecord* pending) {
    if (model.kind() == AttackKind::None || !model.covers(segment) || !fires(model, rng)) {
        return {state, std::nullopt};
    }
    JointState current = state;
    if (current.has_ancilla()) {
        if (pending == nullptr) {
            throw StateError("an earlier ancilla is still attached and no record was given to resolve it");
        }
        current = resolve_ancilla(current, *pending, rng);
    }
    return act_on_transit(model, segment, current, rng);
}

AttackResult attack_decoy(const AttackModel& model, const JointState& state, RandomStream& rng) {
    if (state.layout() != std::vector<Qubit>{Qubit::Transit}) {
        throw StateError("decoy attack expects a lone transit qubit");
    }
    if (model.kind() == AttackKind::None || !model.covers(ChannelSegment::CtoA) || !fires(model, rng)) {
        return {state, std::nullopt};
    }
    return act_on_transit(model, ChannelSegment::CtoA, state, rng);
}

JointState resolve_ancilla(const JointState& state, EveRecord& record, RandomStream& rng) {
    if (!state.has_ancilla()) {
        return state;
    }
    auto measured = measure_qubit(state, Qubit::Ancilla, Basis::Z, rng);
    record.ancilla_outcome = measured.outcome;
    return discard_qubit(measured.state, Qubit::Ancilla);
}

namespace {

// Probabilities that the composed channel seen by `check_kind` flips the Z
// outcome (first) and the X outcome (second).
std::pair<double, double> flip_probabilities(const AttackModel& model, RoundKind check_kind) {
    if (model.kind() == AttackKind::None) {
        throw std::invalid_argument("no detection probability without an attack");
    }
    if (check_kind == RoundKind::MessageRound) {
        throw std::invalid_argument("message rounds carry no check");
    }
    PauliChannel total = kIdentityChannel;
    for (ChannelSegment seg : observed_segments(check_kind)) {
        if (model.covers(seg)) {
            total = compose(total, channel_of(model));
        }
    }
    return {total[2] + total[3], total[1] + total[3]};
}

} // namespace

double analytic_detection_probability(const AttackModel& model, RoundKind check_kind) {
    const auto [x_flip, z_flip] = flip_probabilities(model, check_kind);
    return 0.5 * x_flip + 0.5 * z_flip;
}

double analytic_detection_probability(const AttackModel& model, RoundKind check_kind, Basis basis) {
    const auto [x_flip, z_flip] = flip_probabilities(model, check_kind);
    return basis == Basis::Z ? x_flip : z_flip;
}

std::optional<double> nominal_detection_probability(AttackKind kind) {
    if (kind == AttackKind::InterceptResend || kind == AttackKind::Disturbance) {
        return 0.5;
    }
    return std::nullopt;
}

std::vector<std::pair<std::size_t, Bit>> infer_parities(const PublicTranscript& transcript) {
    std::vector<std::pair<std::size_t, Bit>> out;
    for (const auto& [round, xy] : transcript.announcements()) {
        out.emplace_back(round, static_cast<Bit>(xy.first ^ xy.second));
    }
    return out;
}

std::string to_string(AttackKind kind) {
    switch (kind) {
    case AttackKind::None:
        return "none";
    case AttackKind::InterceptResend:
        return "intercept_resend";
    case AttackKind::Disturbance:
        return "disturbance";
    case AttackKind::EntangleMeasure:
        return "entangle_measure";
    }
    return "?";
}

} // namespace qsdc
