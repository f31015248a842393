#include "qsdc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qsdc/errors.hpp"

namespace qsdc {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(prefix + key, "unknown key");
        }
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double read_number(const json& v, const std::string& field) {
    if (!v.is_number()) {
        throw ConfigError(field, "expected a number");
    }
    return v.get<double>();
}

std::uint64_t read_unsigned(const json& v, const std::string& field) {
    if (!v.is_number_unsigned()) {
        throw ConfigError(field, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

double read_probability(const json& v, const std::string& field) {
    const double p = read_number(v, field);
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(field, "must lie in [0, 1]");
    }
    return p;
}

std::string read_string(const json& v, const std::string& field) {
    if (!v.is_string()) {
        throw ConfigError(field, "expected a string");
    }
    return v.get<std::string>();
}

std::string attack_kind_name(const AttackModel& m) {
    switch (m.kind()) {
    case AttackKind::None:
        return "none";
    case AttackKind::InterceptResend:
        return "intercept_resend";
    case AttackKind::Disturbance:
        return m.pauli() == Pauli::X ? "disturbance_x" : "disturbance_z";
    case AttackKind::EntangleMeasure:
        return "entangle_measure";
    }
    return "none";
}

AttackModel parse_attack(const json& a, bool has_sweep) {
    if (!a.is_object()) {
        throw ConfigError("attack", "expected an object");
    }
    reject_unknown(a, {"kind", "segments", "beta_sq", "probability"}, "attack.");

    const json* kind_v = find(a, "kind");
    if (!kind_v) {
        throw ConfigError("attack.kind", "missing");
    }
    const std::string kind = read_string(*kind_v, "attack.kind");

    std::set<ChannelSegment> segments;
    if (const json* s = find(a, "segments")) {
        if (!s->is_array()) {
            throw ConfigError("attack.segments", "expected an array of segment names");
        }
        for (const auto& item : *s) {
            try {
                segments.insert(parse_segment(read_string(item, "attack.segments")));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("attack.segments", e.what());
            }
        }
    }

    std::optional<double> beta_sq;
    if (const json* b = find(a, "beta_sq")) {
        beta_sq = read_probability(*b, "attack.beta_sq");
    }
    double probability = 1.0;
    if (const json* p = find(a, "probability")) {
        probability = read_probability(*p, "attack.probability");
    }

    if (kind == "none") {
        if (!segments.empty()) {
            throw ConfigError("attack.segments", "must be empty when attack.kind is none");
        }
        return AttackModel::none();
    }
    if (segments.empty()) {
        throw ConfigError("attack.segments", "at least one segment is required for attack.kind " + kind);
    }
    if (beta_sq && kind != "entangle_measure") {
        throw ConfigError("attack.beta_sq", "only valid for entangle_measure");
    }

    AttackModel model;
    if (kind == "intercept_resend") {
        model = AttackModel::intercept_resend(segments);
    } else if (kind == "disturbance_x") {
        model = AttackModel::disturbance(Pauli::X, segments);
    } else if (kind == "disturbance_z") {
        model = AttackModel::disturbance(Pauli::Z, segments);
    } else if (kind == "entangle_measure") {
        if (!beta_sq && !has_sweep) {
            throw ConfigError("attack.beta_sq", "required for entangle_measure");
        }
        model = AttackModel::entangle_measure_beta_sq(beta_sq.value_or(0.0), segments);
    } else {
        throw ConfigError("attack.kind", "unknown attack kind '" + kind + "'");
    }
    return model.with_attack_probability(probability);
}

} // namespace

ChannelSegment parse_segment(const std::string& name) {
    for (auto seg : {ChannelSegment::AtoB, ChannelSegment::BtoC, ChannelSegment::CtoA}) {
        if (to_string(seg) == name) {
            return seg;
        }
    }
    throw std::invalid_argument("unknown channel segment '" + name + "' (expected AtoB, BtoC or CtoA)");
}

LoadedConfig parse_config(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("", "config must be a JSON object");
    }
    reject_unknown(j,
                   {"message_length", "trials", "p_ab_check", "p_bob_cm", "p_charlie_cm", "attack", "abort_policy",
                    "seed", "sweep", "max_rounds", "threads"},
                   "");

    LoadedConfig out;
    auto& e = out.experiment;

    if (const json* s = find(j, "sweep")) {
        if (!s->is_object()) {
            throw ConfigError("sweep", "expected an object");
        }
        reject_unknown(*s, {"beta_sq"}, "sweep.");
        const json* grid = find(*s, "beta_sq");
        if (!grid || !grid->is_array()) {
            throw ConfigError("sweep.beta_sq", "expected an array of numbers");
        }
        if (grid->empty()) {
            throw ConfigError("sweep.beta_sq", "grid must not be empty");
        }
        for (const auto& v : *grid) {
            out.sweep_beta_sq.push_back(read_probability(v, "sweep.beta_sq"));
        }
    }

    if (const json* v = find(j, "message_length")) {
        e.message_length = read_unsigned(*v, "message_length");
    }
    if (const json* v = find(j, "trials")) {
        e.trials = read_unsigned(*v, "trials");
    }
    if (const json* v = find(j, "p_ab_check")) {
        e.schedule.p_ab_check = read_probability(*v, "p_ab_check");
    }
    if (const json* v = find(j, "p_bob_cm")) {
        e.schedule.p_bob_cm = read_probability(*v, "p_bob_cm");
    }
    if (const json* v = find(j, "p_charlie_cm")) {
        e.schedule.p_charlie_cm = read_probability(*v, "p_charlie_cm");
    }
    if (const json* v = find(j, "max_rounds")) {
        e.schedule.max_rounds = read_unsigned(*v, "max_rounds");
    }
    if (const json* v = find(j, "threads")) {
        e.threads = static_cast<unsigned>(read_unsigned(*v, "threads"));
    }
    if (const json* v = find(j, "seed")) {
        e.seed = read_unsigned(*v, "seed");
    }
    if (const json* v = find(j, "abort_policy")) {
        const std::string policy = read_string(*v, "abort_policy");
        if (policy == "strict") {
            e.abort_policy = AbortPolicy::Strict;
        } else if (policy == "record_and_continue") {
            e.abort_policy = AbortPolicy::RecordAndContinue;
        } else {
            throw ConfigError("abort_policy", "expected 'strict' or 'record_and_continue', got '" + policy + "'");
        }
    }
    if (const json* v = find(j, "attack")) {
        e.attack = parse_attack(*v, !out.sweep_beta_sq.empty());
    }
    e.validate();
    return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot read config file '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError("", "malformed JSON in '" + path.string() + "': " + err.what());
    }
    return parse_config(j);
}

json config_to_json(const LoadedConfig& config) {
    const auto& e = config.experiment;
    json attack = {{"kind", attack_kind_name(e.attack)}};
    if (e.attack.kind() != AttackKind::None) {
        json segments = json::array();
        for (auto seg : e.attack.segments()) {
            segments.push_back(to_string(seg));
        }
        attack["segments"] = segments;
        if (e.attack.kind() == AttackKind::EntangleMeasure) {
            attack["beta_sq"] = std::norm(e.attack.beta());
        }
        if (e.attack.attack_probability() < 1.0) {
            attack["probability"] = e.attack.attack_probability();
        }
    }
    json j = {
        {"message_length", e.message_length},
        {"trials", e.trials},
        {"p_ab_check", e.schedule.p_ab_check},
        {"p_bob_cm", e.schedule.p_bob_cm},
        {"p_charlie_cm", e.schedule.p_charlie_cm},
        {"abort_policy", to_string(e.abort_policy)},
        {"seed", e.seed},
        {"attack", attack},
    };
    if (e.schedule.max_rounds != 0) {
        j["max_rounds"] = e.schedule.max_rounds;
    }
    if (e.threads != 1) {
        j["threads"] = e.threads;
    }
    if (!config.sweep_beta_sq.empty()) {
        j["sweep"] = {{"beta_sq", config.sweep_beta_sq}};
    }
    return j;
}

} // namespace qsdc
