#include "pollushield/behaviors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pollushield {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool contains(const std::vector<PeerId>& ids, PeerId id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::ptrdiff_t position(const std::vector<PeerId>& ids, PeerId id) {
    auto it = std::find(ids.begin(), ids.end(), id);
    return it == ids.end() ? -1 : it - ids.begin();
}

}  // namespace

int OnOff::cycle_length() const {
    return std::max(1, static_cast<int>(std::lround(1.0 / on_ratio)));
}

PeerId CollabStatic::designated_polluter() const {
    if (group.empty()) throw std::logic_error("collaborative group has not been assigned");
    return group.at(static_cast<std::size_t>(designated_index));
}

bool PeerBehavior::is_malicious() const { return !std::holds_alternative<Honest>(kind); }

void validate(const PeerBehavior& b) {
    if (!(b.loss_rate >= 0.0 && b.loss_rate <= 1.0))
        throw std::invalid_argument("loss_rate must lie in [0,1]");
    std::visit(overloaded{
                   [](const Honest&) {},
                   [](const PersistentPolluter&) {},
                   [](const OnOff& o) {
                       if (!(o.on_ratio > 0.0 && o.on_ratio < 1.0))
                           throw std::invalid_argument("on-off ratio must lie in (0,1)");
                   },
                   [](const BadMouther& m) {
                       if (!(m.slander_prob >= 0.0 && m.slander_prob <= 1.0))
                           throw std::invalid_argument("slander_prob must lie in [0,1]");
                   },
                   [](const CollabStatic& s) {
                       if (s.designated_index < 0 ||
                           (!s.group.empty() &&
                            static_cast<std::size_t>(s.designated_index) >= s.group.size()))
                           throw std::invalid_argument("designated polluter outside group");
                   },
                   [](const CollabRotating& r) {
                       if (r.rotation_period < 1)
                           throw std::invalid_argument("rotation period must be positive");
                   },
               },
               b.kind);
}

std::string describe(const PeerBehavior& b) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Honest&) { os << "honest"; },
                   [&](const PersistentPolluter&) { os << "persistent"; },
                   [&](const OnOff& o) { os << "onoff(" << o.on_ratio << ")"; },
                   [&](const BadMouther& m) { os << "badmouther(" << m.slander_prob << ")"; },
                   [&](const CollabStatic& s) {
                       os << "collab_static(" << s.group.size() << ")";
                   },
                   [&](const CollabRotating& r) {
                       os << "collab_rotating(" << r.group.size() << ")";
                   },
               },
               b.kind);
    return os.str();
}

ChunkQuality upload_quality(const PeerBehavior& b, PeerId uploader, Round round,
                            std::uint64_t interaction_index, RandomStream& rng) {
    using enum ChunkQuality;
    return std::visit(
        overloaded{
            [&](const Honest&) { return rng.bernoulli(b.loss_rate) ? Polluted : Clean; },
            [&](const PersistentPolluter&) { return Polluted; },
            [&](const OnOff& o) {
                const auto len = static_cast<std::uint64_t>(o.cycle_length());
                return interaction_index % len == len - 1 ? Polluted : Clean;
            },
            [&](const BadMouther&) { return rng.bernoulli(b.loss_rate) ? Polluted : Clean; },
            [&](const CollabStatic& s) {
                return uploader == s.designated_polluter() ? Polluted : Clean;
            },
            [&](const CollabRotating& r) {
                const auto idx = position(r.group, uploader);
                if (idx < 0) return Clean;
                const auto slot = (round / r.rotation_period) % static_cast<Round>(r.group.size());
                return slot == idx ? Polluted : Clean;
            },
        },
        b.kind);
}

double recommendation_value(const PeerBehavior& b, PeerId recommender, PeerId subject,
                            double honest_value, const KeyedDraw& draw) {
    return std::visit(
        overloaded{
            [&](const BadMouther& m) {
                const bool targeted = m.targets.empty() || contains(m.targets, subject);
                return targeted && draw.bernoulli(m.slander_prob) ? 0.0 : honest_value;
            },
            [&](const CollabStatic& s) {
                return subject != recommender && contains(s.group, subject) ? 1.0 : honest_value;
            },
            [&](const CollabRotating& r) {
                return subject != recommender && contains(r.group, subject) ? 1.0 : honest_value;
            },
            [&](const auto&) { return honest_value; },
        },
        b.kind);
}

}  // namespace pollushield
