#pragma once

// Test-only exact enumeration of check outcomes. Keeps its own tiny state
// vector (qubit 0 = home, 1 = transit, every ancilla appended and never
// measured) and branches explicitly over Eve's and the checkers' random
// choices. Shares nothing with the library's state code.

#include <cmath>
#include <complex>
#include <vector>

#include "qsdc/adversary.hpp"

namespace oracle {

using cd = std::complex<double>;

struct Mini {
    int qubits = 0;
    std::vector<cd> amp;  // qubit q is bit (qubits - 1 - q) of the index

    int bit(std::size_t idx, int q) const { return static_cast<int>((idx >> (qubits - 1 - q)) & 1); }
    std::size_t mask(int q) const { return std::size_t{1} << (qubits - 1 - q); }

    double weight() const {
        double w = 0;
        for (auto& a : amp) {
            w += std::norm(a);
        }
        return w;
    }
};

inline Mini epr_pair() {
    const double h = 1.0 / std::sqrt(2.0);
    return {2, {0.0, h, h, 0.0}};  // (|01> + |10>)/sqrt2
}

inline Mini lone_qubit(cd a0, cd a1) {
    // A dummy home qubit fixed at |0> keeps the transit at index 1.
    return {2, {a0, a1, 0.0, 0.0}};
}

inline Mini pauli(const Mini& s, int q, char p) {
    Mini out = s;
    for (std::size_t i = 0; i < s.amp.size(); ++i) {
        if (p == 'X') {
            out.amp[i ^ s.mask(q)] = s.amp[i];
        } else if (p == 'Z' && s.bit(i, q)) {
            out.amp[i] = -s.amp[i];
        }
    }
    return out;
}

// |t>|chi> -> alpha |t>|0>_e + beta |1-t>|1>_e, ancilla appended last.
inline Mini entangle(const Mini& s, int t, cd alpha, cd beta) {
    Mini out{s.qubits + 1, std::vector<cd>(s.amp.size() * 2)};
    for (std::size_t i = 0; i < s.amp.size(); ++i) {
        out.amp[i * 2] += alpha * s.amp[i];
        out.amp[(i ^ s.mask(t)) * 2 + 1] += beta * s.amp[i];
    }
    return out;
}

// Unnormalized projection of qubit q onto outcome o of basis ('Z' or 'X').
inline Mini project(const Mini& s, int q, char basis, int o) {
    Mini out{s.qubits, std::vector<cd>(s.amp.size())};
    const double h = 1.0 / std::sqrt(2.0);
    cd v0 = 1.0, v1 = 0.0;
    if (basis == 'Z') {
        v0 = o == 0 ? 1.0 : 0.0;
        v1 = o == 0 ? 0.0 : 1.0;
    } else {
        v0 = h;
        v1 = o == 0 ? h : -h;
    }
    for (std::size_t i = 0; i < s.amp.size(); ++i) {
        if (s.bit(i, q)) {
            continue;
        }
        const std::size_t j = i | s.mask(q);
        const cd c = std::conj(v0) * s.amp[i] + std::conj(v1) * s.amp[j];
        out.amp[i] = v0 * c;
        out.amp[j] = v1 * c;
    }
    return out;
}

inline Mini scale(Mini s, double f) {
    for (auto& a : s.amp) {
        a *= f;
    }
    return s;
}

/// Branches of Eve's action on the transit qubit; weights live in the norms.
inline std::vector<Mini> eve_acts(const std::vector<Mini>& branches, const qsdc::AttackModel& m) {
    std::vector<Mini> out;
    const double q = m.attack_probability();
    for (const auto& s : branches) {
        if (q < 1.0) {
            out.push_back(scale(s, std::sqrt(1.0 - q)));
        }
        const Mini fired = scale(s, std::sqrt(q));
        switch (m.kind()) {
        case qsdc::AttackKind::None:
            out.push_back(fired);
            break;
        case qsdc::AttackKind::Disturbance:
            out.push_back(pauli(fired, 1, m.pauli() == qsdc::Pauli::X ? 'X' : 'Z'));
            break;
        case qsdc::AttackKind::EntangleMeasure:
            out.push_back(entangle(fired, 1, m.alpha(), m.beta()));
            break;
        case qsdc::AttackKind::InterceptResend:
            for (char b : {'Z', 'X'}) {
                for (int o : {0, 1}) {
                    out.push_back(scale(project(fired, 1, b, o), std::sqrt(0.5)));
                }
            }
            break;
        }
    }
    return out;
}

/// Exact probability that a single check of `kind` fails under `m`.
inline double detection_probability(const qsdc::AttackModel& m, qsdc::RoundKind kind) {
    using qsdc::ChannelSegment;
    using qsdc::RoundKind;
    if (kind == RoundKind::CharlieDecoyCheck) {
        const double h = 1.0 / std::sqrt(2.0);
        struct Decoy {
            cd a0, a1;
            char basis;
            int outcome;
        };
        const Decoy decoys[] = {{1.0, 0.0, 'Z', 0}, {0.0, 1.0, 'Z', 1}, {h, h, 'X', 0}, {h, -h, 'X', 1}};
        double fail = 0.0;
        for (const auto& d : decoys) {
            std::vector<Mini> branches{lone_qubit(d.a0, d.a1)};
            if (m.covers(ChannelSegment::CtoA)) {
                branches = eve_acts(branches, m);
            }
            for (const auto& s : branches) {
                fail += 0.25 * project(s, 1, d.basis, 1 - d.outcome).weight();
            }
        }
        return fail;
    }

    std::vector<Mini> branches{epr_pair()};
    if (m.covers(ChannelSegment::AtoB)) {
        branches = eve_acts(branches, m);
    }
    if (kind == RoundKind::BobControlCheck && m.covers(ChannelSegment::BtoC)) {
        branches = eve_acts(branches, m);
    }
    double fail = 0.0;
    for (const auto& s : branches) {
        for (char basis : {'Z', 'X'}) {
            for (int a : {0, 1}) {
                for (int b : {0, 1}) {
                    const bool ok = basis == 'Z' ? a != b : a == b;
                    if (!ok) {
                        fail += 0.5 * project(project(s, 1, basis, a), 0, basis, b).weight();
                    }
                }
            }
        }
    }
    return fail;
}

} // namespace oracle
