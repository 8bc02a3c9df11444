// Upload and recommendation strategies for honest peers and attackers.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pollushield/random.hpp"
#include "pollushield/trust_core.hpp"

namespace pollushield {

using PeerId = std::uint32_t;

struct Honest {
    friend bool operator==(const Honest&, const Honest&) = default;
};

/// Pollutes every chunk it uploads.
struct PersistentPolluter {
    friend bool operator==(const PersistentPolluter&, const PersistentPolluter&) = default;
};

/// Clean for round(1/on_ratio) - 1 deliveries, then one polluted chunk, per victim.
struct OnOff {
    double on_ratio = 0.5;
    int cycle_length() const;
    friend bool operator==(const OnOff&, const OnOff&) = default;
};

/// Uploads honestly but lies about the peers in `targets` (every peer when
/// empty) with probability slander_prob per enquiry.
struct BadMouther {
    std::vector<PeerId> targets;
    double slander_prob = 1.0;
    friend bool operator==(const BadMouther&, const BadMouther&) = default;
};

/// One designated member pollutes; the rest upload clean chunks and praise
/// every fellow member. `group` is sorted and filled when peers are assigned.
struct CollabStatic {
    std::vector<PeerId> group;
    int designated_index = 0;
    PeerId designated_polluter() const;
    friend bool operator==(const CollabStatic&, const CollabStatic&) = default;
};

/// Members take turns polluting: member m pollutes in rounds where
/// floor(round / rotation_period) mod |group| equals m's position in group.
struct CollabRotating {
    std::vector<PeerId> group;
    int rotation_period = 1;
    friend bool operator==(const CollabRotating&, const CollabRotating&) = default;
};

using BehaviorKind =
    std::variant<Honest, PersistentPolluter, OnOff, BadMouther, CollabStatic, CollabRotating>;

struct PeerBehavior {
    BehaviorKind kind = Honest{};
    double loss_rate = 0.0;

    bool is_malicious() const;
    friend bool operator==(const PeerBehavior&, const PeerBehavior&) = default;
};

/// Throws std::invalid_argument when a field is outside its domain.
void validate(const PeerBehavior& behavior);

/// Short label used in summary output, e.g. "onoff(0.2)".
std::string describe(const PeerBehavior& behavior);

ChunkQuality upload_quality(const PeerBehavior& behavior, PeerId uploader, Round round,
                            std::uint64_t interaction_index, RandomStream& rng);

double recommendation_value(const PeerBehavior& behavior, PeerId recommender, PeerId subject,
                            double honest_value, const KeyedDraw& draw);

}  // namespace pollushield
