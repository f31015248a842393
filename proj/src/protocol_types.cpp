#include "qsdc/protocol_types.hpp"

namespace qsdc {

void PublicTranscript::append(std::vector<TranscriptEvent> batch, std::size_t round) {
    for (auto& event : batch) {
        event.round = round;
        events.push_back(std::move(event));
    }
}

std::vector<std::pair<std::size_t, std::pair<Bit, Bit>>> PublicTranscript::announcements() const {
    std::vector<std::pair<std::size_t, std::pair<Bit, Bit>>> out;
    for (const auto& event : events) {
        if (event.kind == TranscriptEvent::Kind::Announcement && event.announcement) {
            out.emplace_back(event.round, *event.announcement);
        }
    }
    return out;
}

std::string to_string(RoundKind kind) {
    switch (kind) {
    case RoundKind::BobEavesdropCheck:
        return "ab_check";
    case RoundKind::BobControlCheck:
        return "ca_check";
    case RoundKind::CharlieDecoyCheck:
        return "decoy_check";
    case RoundKind::MessageRound:
        return "message";
    }
    return "?";
}

std::string to_string(ChannelSegment segment) {
    switch (segment) {
    case ChannelSegment::AtoB:
        return "AtoB";
    case ChannelSegment::BtoC:
        return "BtoC";
    case ChannelSegment::CtoA:
        return "CtoA";
    }
    return "?";
}

std::string to_string(Party party) {
    switch (party) {
    case Party::Alice:
        return "Alice";
    case Party::Bob:
        return "Bob";
    case Party::Charlie:
        return "Charlie";
    }
    return "?";
}

std::string to_string(RunningMode mode) {
    switch (mode) {
    case RunningMode::Check:
        return "check";
    case RunningMode::Control:
        return "CM";
    case RunningMode::Message:
        return "MM";
    }
    return "?";
}

std::string to_string(TranscriptEvent::Kind kind) {
    using K = TranscriptEvent::Kind;
    switch (kind) {
    case K::Receipt:
        return "receipt";
    case K::ModeAnnouncement:
        return "mode";
    case K::MeasurementReport:
        return "measurement";
    case K::DecoyReveal:
        return "decoy_reveal";
    case K::Announcement:
        return "announcement";
    case K::CheckVerdict:
        return "verdict";
    }
    return "?";
}

std::vector<ChannelSegment> observed_segments(RoundKind kind) {
    switch (kind) {
    case RoundKind::BobEavesdropCheck:
        return {ChannelSegment::AtoB};
    case RoundKind::BobControlCheck:
        return {ChannelSegment::AtoB, ChannelSegment::BtoC};
    case RoundKind::CharlieDecoyCheck:
        return {ChannelSegment::CtoA};
    case RoundKind::MessageRound:
        return {ChannelSegment::AtoB, ChannelSegment::BtoC, ChannelSegment::CtoA};
    }
    return {};
}

} // namespace qsdc
