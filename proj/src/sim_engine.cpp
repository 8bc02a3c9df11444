#include "pollushield/sim_engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pollushield {

double admission_probability(const Policy& policy, double trust, const TrustParams& params) {
    switch (policy.kind) {
    case Policy::Kind::Proposed:
        return transaction_probability(trust, params);
    case Policy::Kind::SingleThreshold:
    case Policy::Kind::PeerTrustBaseline:
        return trust >= policy.threshold ? 1.0 : 0.0;
    case Policy::Kind::Open:
        return 1.0;
    }
    return 0.0;
}

std::string to_string(const Policy& policy) {
    std::ostringstream os;
    switch (policy.kind) {
    case Policy::Kind::Proposed: return "proposed";
    case Policy::Kind::Open: return "open";
    case Policy::Kind::SingleThreshold: os << "single:"; break;
    case Policy::Kind::PeerTrustBaseline: os << "peertrust:"; break;
    }
    os << policy.threshold;
    return os.str();
}

World::World(std::vector<Peer> peers, std::uint64_t seed, Policy policy, int request_budget)
    : peers_(std::move(peers)), policy_(policy), request_budget_(request_budget) {
    if (request_budget_ < 1) throw std::invalid_argument("request budget must be positive");
    rngs_.reserve(peers_.size());
    peer_seeds_.reserve(peers_.size());
    for (std::size_t i = 0; i < peers_.size(); ++i) {
        if (peers_[i].id != i) throw std::invalid_argument("peer ids must be 0..n-1 in order");
        for (PeerId c : peers_[i].candidates) {
            check_id(c);
            if (c == i) throw std::invalid_argument("a peer cannot advertise to itself");
        }
        peer_seeds_.push_back(derive_seed(seed, 0x70656572ULL, i));
        rngs_.emplace_back(peer_seeds_.back());
    }
    counters_.resize(peers_.size());
}

void World::check_id(PeerId id) const {
    if (id >= peers_.size()) throw std::out_of_range("unknown peer id " + std::to_string(id));
}

void World::reset_counters() {
    counters_.assign(peers_.size(), PeerCounters{});
}

void World::seed_history(PeerId observer, PeerId subject, std::uint64_t clean,
                         std::uint64_t polluted) {
    check_id(observer);
    check_id(subject);
    if (observer == subject) throw std::invalid_argument("a peer cannot seed history with itself");
    auto& owner = peers_[observer];
    auto& rec = owner.table[subject];
    rec.state = apply_decay(rec.state, round_, owner.params);
    rec.state.n_clean += static_cast<double>(clean);
    rec.state.n_polluted += static_cast<double>(polluted);
    rec.state.n_transactions += static_cast<double>(clean + polluted);
    rec.deliveries += clean + polluted;
}

const PairRecord* World::record(const Peer& owner, PeerId subject) const {
    auto it = owner.table.find(subject);
    return it == owner.table.end() ? nullptr : &it->second;
}

TrustState World::decayed(const Peer& owner, PeerId subject) const {
    const PairRecord* rec = record(owner, subject);
    if (rec == nullptr) return TrustState{0.0, 0.0, 0.0, round_};
    return apply_decay(rec->state, round_, owner.params);
}

std::optional<double> World::query_indirect(PeerId observer, PeerId subject) const {
    check_id(observer);
    check_id(subject);
    if (observer == subject) throw TrustError("self-evaluation: observer equals subject");
    const Peer& o = peers_[observer];

    struct Candidate {
        PeerId id;
        double credibility;
    };
    std::vector<Candidate> common;
    for (const auto& [k, rec] : o.table) {
        if (k == subject || rec.deliveries == 0) continue;
        const PairRecord* about = record(peers_[k], subject);
        if (about == nullptr || about->deliveries == 0) continue;
        common.push_back({k, direct_trust(apply_decay(rec.state, round_, o.params), o.params)});
    }
    if (common.empty()) return std::nullopt;

    std::sort(common.begin(), common.end(), [](const Candidate& a, const Candidate& b) {
        return a.credibility != b.credibility ? a.credibility > b.credibility : a.id < b.id;
    });
    if (common.size() > static_cast<std::size_t>(o.params.k_recommenders))
        common.resize(static_cast<std::size_t>(o.params.k_recommenders));

    std::vector<Recommendation> recs;
    recs.reserve(common.size());
    for (const auto& c : common) {
        const Peer& k = peers_[c.id];
        const double honest = direct_trust(decayed(k, subject), k.params);
        const KeyedDraw draw{derive_seed(peer_seeds_[c.id], round_, observer, subject)};
        recs.push_back({c.credibility,
                        recommendation_value(k.behavior, c.id, subject, honest, draw)});
    }
    return indirect_trust(recs);
}

TrustBreakdown World::evaluate(PeerId observer, PeerId subject) const {
    check_id(observer);
    check_id(subject);
    if (observer == subject) throw TrustError("self-evaluation: observer equals subject");
    const Peer& o = peers_[observer];
    const TrustState st = decayed(o, subject);

    TrustBreakdown b;
    b.direct = direct_trust(st, o.params);
    b.alpha = confidence_factor(st, o.params);
    b.indirect = query_indirect(observer, subject);
    if (record(o, subject) == nullptr && !b.indirect) {
        b.trust = o.params.cold_start_trust;
        return b;
    }
    b.trust = combine_trust(b.direct, b.indirect, b.alpha, o.params.cold_start_trust);
    return b;
}

std::vector<Selection> World::select_providers(PeerId requester, std::span<const PeerId> candidates,
                                               int k) {
    check_id(requester);
    const Peer& r = peers_[requester];
    std::vector<Selection> ranked;
    ranked.reserve(candidates.size());
    for (PeerId c : candidates) {
        if (c == requester) throw std::invalid_argument("candidate list contains the requester");
        const double t = evaluate_trust(requester, c);
        if (t < r.params.theta_p) {
            auto& flagged = counters_[c].first_flagged;
            if (!flagged) flagged = round_;
        }
        ranked.push_back({c, t});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Selection& a, const Selection& b) {
        return a.trust != b.trust ? a.trust > b.trust : a.provider < b.provider;
    });
    if (k >= 0 && ranked.size() > static_cast<std::size_t>(k))
        ranked.resize(static_cast<std::size_t>(k));

    std::vector<Selection> admitted;
    for (const auto& s : ranked)
        if (rngs_[requester].bernoulli(admission_probability(policy_, s.trust, r.params)))
            admitted.push_back(s);
    return admitted;
}

void World::run_round() {
    // Selection reads every table as of the start of the round; deliveries
    // are applied afterwards so the order of requesters cannot leak into
    // another requester's view.
    std::vector<std::pair<PeerId, std::vector<Selection>>> plans;
    for (const Peer& p : peers_) {
        if (!p.requester || p.candidates.empty()) continue;
        auto chosen = select_providers(p.id, p.candidates, p.params.k_providers);
        if (chosen.size() > static_cast<std::size_t>(request_budget_))
            chosen.resize(static_cast<std::size_t>(request_budget_));
        if (!chosen.empty()) plans.emplace_back(p.id, std::move(chosen));
    }

    for (auto& [rid, chosen] : plans) {
        Peer& r = peers_[rid];
        for (const auto& s : chosen) {
            auto& rec = r.table[s.provider];
            const Peer& provider = peers_[s.provider];
            const ChunkQuality q = upload_quality(provider.behavior, provider.id, round_,
                                                  rec.deliveries, rngs_[s.provider]);
            rec.state = record_delivery(apply_decay(rec.state, round_, r.params), q);
            ++rec.deliveries;
            log_.push_back({round_, rid, s.provider, q, s.trust});
            ++counters_[s.provider].requests_received;
            if (q == ChunkQuality::Clean)
                ++counters_[rid].clean_received;
            else
                ++counters_[rid].polluted_received;
        }
    }
    ++round_;
}

}  // namespace pollushield
