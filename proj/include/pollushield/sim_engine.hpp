// Round-based mesh overlay. Each round every requester ranks the peers that
// advertise to it by trust, admits the top K through its transaction policy,
// downloads one chunk from each admitted provider up to the request budget,
// and records the outcome in its own trust table.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pollushield/behaviors.hpp"
#include "pollushield/random.hpp"
#include "pollushield/trust_core.hpp"

namespace pollushield {

struct Policy {
    enum class Kind { Proposed, SingleThreshold, PeerTrustBaseline, Open };
    Kind kind = Kind::Proposed;
    double threshold = 0.8;  // SingleThreshold and PeerTrustBaseline only

    static Policy proposed() { return {Kind::Proposed, 0.8}; }
    static Policy single(double t) { return {Kind::SingleThreshold, t}; }
    static Policy peertrust(double t = 0.7) { return {Kind::PeerTrustBaseline, t}; }
    static Policy open() { return {Kind::Open, 0.8}; }

    friend bool operator==(const Policy&, const Policy&) = default;
};

/// Probability that a requester transacts with a provider it trusts `trust`.
double admission_probability(const Policy& policy, double trust, const TrustParams& params);

std::string to_string(const Policy& policy);

/// Evidence one peer holds about another. `deliveries` counts chunks actually
/// received (undecayed) and decides membership of recommender sets.
struct PairRecord {
    TrustState state;
    std::uint64_t deliveries = 0;

    friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct Peer {
    PeerId id = 0;
    PeerBehavior behavior;
    TrustParams params;
    bool requester = true;
    std::vector<PeerId> candidates;  // peers advertising chunks to this one
    std::map<PeerId, PairRecord> table;
};

struct TransactionOutcome {
    Round round = 0;
    PeerId requester = 0;
    PeerId provider = 0;
    ChunkQuality quality = ChunkQuality::Clean;
    double trust_at_selection = 0.0;

    friend bool operator==(const TransactionOutcome&, const TransactionOutcome&) = default;
};

struct TrustBreakdown {
    double direct = 0.0;
    std::optional<double> indirect;
    double alpha = 0.0;
    double trust = 0.0;
};

struct Selection {
    PeerId provider = 0;
    double trust = 0.0;
};

/// Per-peer counters accumulated since the last reset_counters().
struct PeerCounters {
    std::uint64_t clean_received = 0;
    std::uint64_t polluted_received = 0;
    std::uint64_t requests_received = 0;
    std::optional<Round> first_flagged;  // first round some requester rated it below theta_p
};

class World {
public:
    World(std::vector<Peer> peers, std::uint64_t seed, Policy policy, int request_budget = 1);

    std::size_t size() const { return peers_.size(); }
    Round round() const { return round_; }
    const Peer& peer(PeerId id) const { return peers_.at(id); }
    std::span<const TransactionOutcome> event_log() const { return log_; }
    const PeerCounters& counters(PeerId id) const { return counters_.at(id); }
    const Policy& policy() const { return policy_; }

    void set_policy(Policy policy) { policy_ = policy; }
    void reset_counters();

    /// Adds prior history in which `observer` received the given chunks from
    /// `subject`, dated at the current round.
    void seed_history(PeerId observer, PeerId subject, std::uint64_t clean,
                      std::uint64_t polluted);

    TrustBreakdown evaluate(PeerId observer, PeerId subject) const;
    double evaluate_trust(PeerId observer, PeerId subject) const {
        return evaluate(observer, subject).trust;
    }
    std::optional<double> query_indirect(PeerId observer, PeerId subject) const;

    /// Top-K candidates by trust (ties to the lower id), each admitted with the
    /// policy's probability using the requester's stream. Returns admitted
    /// providers in rank order.
    std::vector<Selection> select_providers(PeerId requester, std::span<const PeerId> candidates,
                                            int k);

    void run_round();

private:
    TrustState decayed(const Peer& owner, PeerId subject) const;
    const PairRecord* record(const Peer& owner, PeerId subject) const;
    void check_id(PeerId id) const;

    std::vector<Peer> peers_;
    std::vector<RandomStream> rngs_;
    std::vector<std::uint64_t> peer_seeds_;
    std::vector<PeerCounters> counters_;
    std::vector<TransactionOutcome> log_;
    Policy policy_;
    int request_budget_ = 1;
    Round round_ = 0;
};

}  // namespace pollushield
