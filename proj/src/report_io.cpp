#include "qsdc/report_io.hpp"

#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qsdc::io {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) {
        return std::nullopt;
    }
    return v.get<double>();
}

json proportion_json(const Proportion& p) {
    return {
        {"checks_run", p.checks_run},
        {"checks_failed", p.checks_failed},
        {"estimate", p.estimate},
        {"ci_low", p.ci.low},
        {"ci_high", p.ci.high},
        {"analytic", optional_number(p.analytic)},
        {"z_score", optional_number(p.z_score)},
    };
}

Proportion proportion_from(const json& j) {
    Proportion p;
    p.checks_run = j.at("checks_run").get<std::uint64_t>();
    p.checks_failed = j.at("checks_failed").get<std::uint64_t>();
    p.estimate = j.at("estimate").get<double>();
    p.ci = {j.at("ci_low").get<double>(), j.at("ci_high").get<double>()};
    p.analytic = read_optional(j, "analytic");
    p.z_score = read_optional(j, "z_score");
    return p;
}

json check_json(const CheckStats& c) {
    return {{"all", proportion_json(c.all)}, {"basis_z", proportion_json(c.basis_z)},
            {"basis_x", proportion_json(c.basis_x)}};
}

CheckStats check_from(const json& j) {
    return {proportion_from(j.at("all")), proportion_from(j.at("basis_z")), proportion_from(j.at("basis_x"))};
}

RoundKind round_kind_from(const std::string& name) {
    for (auto kind : {RoundKind::BobEavesdropCheck, RoundKind::BobControlCheck, RoundKind::CharlieDecoyCheck,
                      RoundKind::MessageRound}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown round kind '" + name + "'");
}

// --- CSV helpers ---------------------------------------------------------

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (std::size_t pos = 0; pos < line.size(); ++pos) {
        const char c = line[pos];
        if (in_quotes) {
            if (c == '"' && pos + 1 < line.size() && line[pos + 1] == '"') {
                current += '"';
                ++pos;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::vector<std::vector<std::string>> read_table(const std::string& text, const std::string& expected_header) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != expected_header) {
        throw std::invalid_argument("CSV header mismatch; expected '" + expected_header + "'");
    }
    const std::size_t columns = split_csv_line(expected_header).size();
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != columns) {
            throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(columns));
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += quote(fields[i]);
    }
    return out + "\n";
}

std::string opt_cell(const std::optional<double>& v) {
    return v ? format_probability(*v) : std::string();
}

std::optional<double> opt_parse(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return std::stod(s);
}

std::uint64_t parse_u64(const std::string& s) {
    return std::stoull(s);
}

const std::string kReportHeader = "section,item,count,failed,value,ci_low,ci_high,analytic,z_score";

void emit_proportion(std::string& out, const std::string& item, const Proportion& p) {
    out += join({"detection", item, std::to_string(p.checks_run), std::to_string(p.checks_failed),
                 format_probability(p.estimate), format_probability(p.ci.low), format_probability(p.ci.high),
                 opt_cell(p.analytic), opt_cell(p.z_score)});
}

Proportion parse_proportion(const std::vector<std::string>& f) {
    Proportion p;
    p.checks_run = parse_u64(f[2]);
    p.checks_failed = parse_u64(f[3]);
    p.estimate = std::stod(f[4]);
    p.ci = {std::stod(f[5]), std::stod(f[6])};
    p.analytic = opt_parse(f[7]);
    p.z_score = opt_parse(f[8]);
    return p;
}

const std::string kCurveHeader =
    "beta_sq,ab_checks,ab_failed,ab_analytic,ab_sampled,ab_ci_low,ab_ci_high,"
    "ab_z_checks,ab_z_failed,ab_z_analytic,ab_z_sampled,"
    "decoy_checks,decoy_failed,decoy_analytic,decoy_sampled,decoy_ci_low,decoy_ci_high,"
    "decoy_x_checks,decoy_x_failed,decoy_x_analytic,decoy_x_sampled";

} // namespace

std::string format_probability(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

json to_json(const ExperimentReport& r) {
    json summary = {
        {"trials", r.summary.trials},       {"completed", r.summary.completed},
        {"aborted", r.summary.aborted},     {"exhausted", r.summary.exhausted},
        {"rounds", r.summary.rounds},       {"first_abort", nullptr},
    };
    if (r.summary.first_abort) {
        summary["first_abort"] = {{"trial", r.summary.first_abort->trial},
                                  {"round", r.summary.first_abort->round},
                                  {"check", to_string(r.summary.first_abort->check)}};
    }
    return {
        {"seed", r.seed},
        {"message_length", r.message_length},
        {"attack", r.attack},
        {"abort_policy", r.abort_policy},
        {"summary", summary},
        {"detection",
         {{"ab_check", check_json(r.detection.ab_check)},
          {"ca_check", check_json(r.detection.ca_check)},
          {"decoy_check", check_json(r.detection.decoy_check)},
          {"nominal", optional_number(r.detection.nominal)}}},
        {"leakage",
         {{"rounds_audited", r.leakage.rounds_audited},
          {"parity_identity_fraction", r.leakage.parity_identity_fraction},
          {"mi_announcement_alice", r.leakage.mi_announcement_alice},
          {"mi_announcement_bob", r.leakage.mi_announcement_bob},
          {"mi_announcement_charlie", r.leakage.mi_announcement_charlie},
          {"mi_parity", r.leakage.mi_parity}}},
        {"fidelity",
         {{"alice", r.fidelity.alice},
          {"bob", r.fidelity.bob},
          {"charlie", r.fidelity.charlie},
          {"delivered", r.fidelity.delivered}}},
    };
}

ExperimentReport report_from_json(const json& j) {
    ExperimentReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.message_length = j.at("message_length").get<std::uint64_t>();
    r.attack = j.at("attack").get<std::string>();
    r.abort_policy = j.at("abort_policy").get<std::string>();

    const auto& s = j.at("summary");
    r.summary.trials = s.at("trials").get<std::uint64_t>();
    r.summary.completed = s.at("completed").get<std::uint64_t>();
    r.summary.aborted = s.at("aborted").get<std::uint64_t>();
    r.summary.exhausted = s.at("exhausted").get<std::uint64_t>();
    r.summary.rounds = s.at("rounds").get<std::uint64_t>();
    if (!s.at("first_abort").is_null()) {
        const auto& fa = s.at("first_abort");
        r.summary.first_abort = FirstAbort{fa.at("trial").get<std::uint64_t>(), fa.at("round").get<std::uint64_t>(),
                                           round_kind_from(fa.at("check").get<std::string>())};
    }

    const auto& d = j.at("detection");
    r.detection.ab_check = check_from(d.at("ab_check"));
    r.detection.ca_check = check_from(d.at("ca_check"));
    r.detection.decoy_check = check_from(d.at("decoy_check"));
    r.detection.nominal = read_optional(d, "nominal");

    const auto& l = j.at("leakage");
    r.leakage.rounds_audited = l.at("rounds_audited").get<std::uint64_t>();
    r.leakage.parity_identity_fraction = l.at("parity_identity_fraction").get<double>();
    r.leakage.mi_announcement_alice = l.at("mi_announcement_alice").get<double>();
    r.leakage.mi_announcement_bob = l.at("mi_announcement_bob").get<double>();
    r.leakage.mi_announcement_charlie = l.at("mi_announcement_charlie").get<double>();
    r.leakage.mi_parity = l.at("mi_parity").get<double>();

    const auto& f = j.at("fidelity");
    r.fidelity = {f.at("alice").get<double>(), f.at("bob").get<double>(), f.at("charlie").get<double>(),
                  f.at("delivered").get<double>()};
    return r;
}

std::string to_csv(const ExperimentReport& r) {
    std::string out = kReportHeader + "\n";
    auto row = [&](const std::string& section, const std::string& item, const std::string& count,
                   const std::string& failed, const std::string& value) {
        out += join({section, item, count, failed, value, "", "", "", ""});
    };
    row("meta", "seed", std::to_string(r.seed), "", "");
    row("meta", "message_length", std::to_string(r.message_length), "", "");
    row("meta", "attack", "", "", r.attack);
    row("meta", "abort_policy", "", "", r.abort_policy);

    row("summary", "trials", std::to_string(r.summary.trials), "", "");
    row("summary", "completed", std::to_string(r.summary.completed), "", "");
    row("summary", "aborted", std::to_string(r.summary.aborted), "", "");
    row("summary", "exhausted", std::to_string(r.summary.exhausted), "", "");
    row("summary", "rounds", std::to_string(r.summary.rounds), "", "");
    if (r.summary.first_abort) {
        row("summary", "first_abort", std::to_string(r.summary.first_abort->trial),
            std::to_string(r.summary.first_abort->round), to_string(r.summary.first_abort->check));
    }

    const std::pair<const char*, const CheckStats*> checks[] = {{"ab_check", &r.detection.ab_check},
                                                               {"ca_check", &r.detection.ca_check},
                                                               {"decoy_check", &r.detection.decoy_check}};
    for (const auto& [name, stats] : checks) {
        emit_proportion(out, name, stats->all);
        emit_proportion(out, std::string(name) + ".Z", stats->basis_z);
        emit_proportion(out, std::string(name) + ".X", stats->basis_x);
    }
    if (r.detection.nominal) {
        row("detection", "nominal", "", "", format_probability(*r.detection.nominal));
    }

    row("leakage", "rounds_audited", std::to_string(r.leakage.rounds_audited), "", "");
    row("leakage", "parity_identity_fraction", "", "", format_probability(r.leakage.parity_identity_fraction));
    row("leakage", "mi_announcement_alice", "", "", format_probability(r.leakage.mi_announcement_alice));
    row("leakage", "mi_announcement_bob", "", "", format_probability(r.leakage.mi_announcement_bob));
    row("leakage", "mi_announcement_charlie", "", "", format_probability(r.leakage.mi_announcement_charlie));
    row("leakage", "mi_parity", "", "", format_probability(r.leakage.mi_parity));

    row("fidelity", "alice", "", "", format_probability(r.fidelity.alice));
    row("fidelity", "bob", "", "", format_probability(r.fidelity.bob));
    row("fidelity", "charlie", "", "", format_probability(r.fidelity.charlie));
    row("fidelity", "delivered", "", "", format_probability(r.fidelity.delivered));
    return out;
}

ExperimentReport report_from_csv(const std::string& text) {
    ExperimentReport r;
    const std::map<std::string, CheckStats*> checks = {{"ab_check", &r.detection.ab_check},
                                                       {"ca_check", &r.detection.ca_check},
                                                       {"decoy_check", &r.detection.decoy_check}};
    const std::map<std::string, std::uint64_t*> counts = {
        {"meta/seed", &r.seed},
        {"meta/message_length", &r.message_length},
        {"summary/trials", &r.summary.trials},
        {"summary/completed", &r.summary.completed},
        {"summary/aborted", &r.summary.aborted},
        {"summary/exhausted", &r.summary.exhausted},
        {"summary/rounds", &r.summary.rounds},
        {"leakage/rounds_audited", &r.leakage.rounds_audited},
    };
    const std::map<std::string, double*> values = {
        {"leakage/parity_identity_fraction", &r.leakage.parity_identity_fraction},
        {"leakage/mi_announcement_alice", &r.leakage.mi_announcement_alice},
        {"leakage/mi_announcement_bob", &r.leakage.mi_announcement_bob},
        {"leakage/mi_announcement_charlie", &r.leakage.mi_announcement_charlie},
        {"leakage/mi_parity", &r.leakage.mi_parity},
        {"fidelity/alice", &r.fidelity.alice},
        {"fidelity/bob", &r.fidelity.bob},
        {"fidelity/charlie", &r.fidelity.charlie},
        {"fidelity/delivered", &r.fidelity.delivered},
    };

    for (const auto& f : read_table(text, kReportHeader)) {
        const std::string key = f[0] + "/" + f[1];
        if (auto it = counts.find(key); it != counts.end()) {
            *it->second = parse_u64(f[2]);
        } else if (auto vit = values.find(key); vit != values.end()) {
            *vit->second = std::stod(f[4]);
        } else if (key == "meta/attack") {
            r.attack = f[4];
        } else if (key == "meta/abort_policy") {
            r.abort_policy = f[4];
        } else if (key == "summary/first_abort") {
            r.summary.first_abort = FirstAbort{parse_u64(f[2]), parse_u64(f[3]), round_kind_from(f[4])};
        } else if (key == "detection/nominal") {
            r.detection.nominal = std::stod(f[4]);
        } else if (f[0] == "detection") {
            const auto dot = f[1].find('.');
            const std::string base = f[1].substr(0, dot);
            auto cit = checks.find(base);
            if (cit == checks.end()) {
                throw std::invalid_argument("unknown detection row '" + f[1] + "'");
            }
            Proportion p = parse_proportion(f);
            if (dot == std::string::npos) {
                cit->second->all = p;
            } else if (f[1].substr(dot + 1) == "Z") {
                cit->second->basis_z = p;
            } else {
                cit->second->basis_x = p;
            }
        } else {
            throw std::invalid_argument("unknown CSV row '" + key + "'");
        }
    }
    return r;
}

json to_json(const std::vector<CurveRow>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back({{"beta_sq", row.beta_sq},
                       {"ab_check", check_json(row.ab_check)},
                       {"decoy_check", check_json(row.decoy_check)}});
    }
    return out;
}

std::vector<CurveRow> curve_from_json(const json& j) {
    std::vector<CurveRow> rows;
    for (const auto& item : j) {
        rows.push_back({item.at("beta_sq").get<double>(), check_from(item.at("ab_check")),
                        check_from(item.at("decoy_check"))});
    }
    return rows;
}

std::string to_csv(const std::vector<CurveRow>& rows) {
    std::string out = kCurveHeader + "\n";
    for (const auto& row : rows) {
        const auto& ab = row.ab_check;
        const auto& dc = row.decoy_check;
        out += join({format_probability(row.beta_sq),
                     std::to_string(ab.all.checks_run), std::to_string(ab.all.checks_failed),
                     opt_cell(ab.all.analytic), format_probability(ab.all.estimate),
                     format_probability(ab.all.ci.low), format_probability(ab.all.ci.high),
                     std::to_string(ab.basis_z.checks_run), std::to_string(ab.basis_z.checks_failed),
                     opt_cell(ab.basis_z.analytic), format_probability(ab.basis_z.estimate),
                     std::to_string(dc.all.checks_run), std::to_string(dc.all.checks_failed),
                     opt_cell(dc.all.analytic), format_probability(dc.all.estimate),
                     format_probability(dc.all.ci.low), format_probability(dc.all.ci.high),
                     std::to_string(dc.basis_x.checks_run), std::to_string(dc.basis_x.checks_failed),
                     opt_cell(dc.basis_x.analytic), format_probability(dc.basis_x.estimate)});
    }
    return out;
}

std::vector<CurveRow> curve_from_csv(const std::string& text) {
    std::vector<CurveRow> rows;
    for (const auto& f : read_table(text, kCurveHeader)) {
        CurveRow row;
        row.beta_sq = std::stod(f[0]);
        auto& ab = row.ab_check;
        ab.all.checks_run = parse_u64(f[1]);
        ab.all.checks_failed = parse_u64(f[2]);
        ab.all.analytic = opt_parse(f[3]);
        ab.all.estimate = std::stod(f[4]);
        ab.all.ci = {std::stod(f[5]), std::stod(f[6])};
        ab.basis_z.checks_run = parse_u64(f[7]);
        ab.basis_z.checks_failed = parse_u64(f[8]);
        ab.basis_z.analytic = opt_parse(f[9]);
        ab.basis_z.estimate = std::stod(f[10]);
        auto& dc = row.decoy_check;
        dc.all.checks_run = parse_u64(f[11]);
        dc.all.checks_failed = parse_u64(f[12]);
        dc.all.analytic = opt_parse(f[13]);
        dc.all.estimate = std::stod(f[14]);
        dc.all.ci = {std::stod(f[15]), std::stod(f[16])};
        dc.basis_x.checks_run = parse_u64(f[17]);
        dc.basis_x.checks_failed = parse_u64(f[18]);
        dc.basis_x.analytic = opt_parse(f[19]);
        dc.basis_x.estimate = std::stod(f[20]);
        rows.push_back(row);
    }
    return rows;
}

json to_json(const OracleVerdict& verdict) {
    json rows = json::array();
    for (const auto& row : verdict.rows) {
        rows.push_back({{"i", row.i},
                        {"j", row.j},
                        {"k", row.k},
                        {"r", row.bell.r},
                        {"s", row.bell.s},
                        {"x", row.x},
                        {"y", row.y},
                        {"alice", {row.alice.first, row.alice.second}},
                        {"bob", {row.bob.first, row.bob.second}},
                        {"charlie", {row.charlie.first, row.charlie.second}},
                        {"ok", row.ok}});
    }
    return {{"passed", verdict.passed}, {"rows", rows}};
}

} // namespace qsdc::io
