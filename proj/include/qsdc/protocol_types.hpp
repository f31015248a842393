#pragma once

// Vocabulary shared by the protocol engine and the adversary: round kinds,
// channel segments and the public classical transcript.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsdc/quantum_state.hpp"

namespace qsdc {

enum class RoundKind {
    BobEavesdropCheck,  // Bob measures the transit qubit, checks with Alice (A-B check)
    BobControlCheck,    // Bob ran control mode, Charlie checks with Alice (C-A check)
    CharlieDecoyCheck,  // Charlie sent a decoy qubit to Alice
    MessageRound,
};

enum class ChannelSegment { AtoB, BtoC, CtoA };

enum class Party { Alice, Bob, Charlie };

enum class RunningMode { Check, Control, Message };

/// One classical message on the authenticated public channel.
struct TranscriptEvent {
    enum class Kind {
        Receipt,            // "I received a qubit"
        ModeAnnouncement,   // running mode chosen for this round
        MeasurementReport,  // basis and outcome disclosed during a check
        DecoyReveal,        // Charlie names the decoy state he sent
        Announcement,       // Alice's (x, y)
        CheckVerdict,       // continue or abort after a check
    };

    std::size_t round = 0;
    Party speaker = Party::Alice;
    Kind kind = Kind::Receipt;
    std::optional<RunningMode> mode;
    std::optional<Basis> basis;
    std::optional<Bit> outcome;
    std::optional<DecoyState> decoy;
    std::optional<std::pair<Bit, Bit>> announcement;
    std::optional<bool> passed;

    friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

/// Everything sent over the classical channel, in order. Readable by Eve.
struct PublicTranscript {
    std::vector<TranscriptEvent> events;

    void append(std::vector<TranscriptEvent> batch, std::size_t round);

    /// (round, x, y) for every announcement, in order.
    std::vector<std::pair<std::size_t, std::pair<Bit, Bit>>> announcements() const;
};

std::string to_string(RoundKind kind);
std::string to_string(ChannelSegment segment);
std::string to_string(Party party);
std::string to_string(RunningMode mode);
std::string to_string(TranscriptEvent::Kind kind);

/// Segments whose tampering a given check kind can observe.
std::vector<ChannelSegment> observed_segments(RoundKind kind);

} // namespace qsdc
