#include "pollushield/scenarios.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pollushield {

namespace {

void check_peer(const ScenarioConfig& c, PeerId id, const char* what) {
    if (id >= c.n_peers)
        throw ConfigError(std::string(what) + " references unknown peer " + std::to_string(id));
}

}  // namespace

void validate(const ScenarioConfig& c) {
    if (c.n_peers == 0) throw ConfigError("n_peers must be positive");
    if (c.rounds <= 0) throw ConfigError("rounds must be positive");
    if (c.warmup_rounds < 0) throw ConfigError("warmup_rounds must be non-negative");
    if (c.request_budget < 1) throw ConfigError("request_budget must be positive");
    if (c.neighbor_degree < 0) throw ConfigError("neighbor_degree must be non-negative");
    const auto [lo, hi] = c.loss_rate_range;
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0))
        throw ConfigError("loss_rate_range must satisfy 0 <= lo <= hi <= 1");
    if (c.policy.kind == Policy::Kind::SingleThreshold ||
        c.policy.kind == Policy::Kind::PeerTrustBaseline) {
        if (!(c.policy.threshold >= 0.0 && c.policy.threshold <= 1.0))
            throw ConfigError("policy threshold must lie in [0,1]");
    }

    std::uint64_t total = 0;
    for (const auto& g : c.behavior_mix) {
        try {
            validate(g.behavior);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("behavior: ") + e.what());
        }
        if (g.count == 0) throw ConfigError("behavior count must be positive");
        if (auto* s = std::get_if<CollabStatic>(&g.behavior.kind);
            s && static_cast<std::uint32_t>(s->designated_index) >= g.count)
            throw ConfigError("designated polluter index outside its collaborative group");
        if (auto* m = std::get_if<BadMouther>(&g.behavior.kind))
            for (PeerId t : m->targets) check_peer(c, t, "bad-mouthing target");
        total += g.count;
    }
    if (total != c.n_peers)
        throw ConfigError("behavior counts sum to " + std::to_string(total) + " but n_peers is " +
                          std::to_string(c.n_peers));

    try {
        validate(c.params);
        for (const auto& o : c.param_overrides) {
            check_peer(c, o.peer, "override");
            validate(o.params);
        }
    } catch (const TrustError& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }

    for (PeerId id : c.requesters) check_peer(c, id, "requesters");
    for (PeerId id : c.passive) check_peer(c, id, "passive");
    for (const auto& p : c.observed_pairs) {
        check_peer(c, p.observer, "observe");
        check_peer(c, p.subject, "observe");
        if (p.observer == p.subject) throw ConfigError("observed pair must name two peers");
    }
    for (const auto& l : c.candidate_lists) {
        check_peer(c, l.requester, "candidates");
        std::set<PeerId> seen;
        for (PeerId id : l.providers) {
            check_peer(c, id, "candidates");
            if (id == l.requester) throw ConfigError("a peer cannot be its own candidate");
            if (!seen.insert(id).second) throw ConfigError("duplicate candidate");
        }
    }
    for (const auto& h : c.history) {
        check_peer(c, h.observer, "history");
        check_peer(c, h.subject, "history");
        if (h.observer == h.subject) throw ConfigError("history must name two peers");
    }
}

TrustParams peertrust_baseline_params(TrustParams p) {
    p.dt_model = DirectModel::DTMA;
    p.cf_model = ConfidenceModel::Constant;
    p.cf_constant = 0.5;
    p.lambda = 0.0;
    p.mu = 0.0;
    return p;
}

TrustParams effective_params(const ScenarioConfig& c, PeerId peer) {
    TrustParams p = c.params;
    for (const auto& o : c.param_overrides)
        if (o.peer == peer) p = o.params;
    if (c.policy.kind == Policy::Kind::PeerTrustBaseline) p = peertrust_baseline_params(p);
    return p;
}

World make_world(const ScenarioConfig& c) {
    validate(c);
    std::vector<Peer> peers(c.n_peers);
    PeerId next = 0;
    for (const auto& g : c.behavior_mix) {
        std::vector<PeerId> members(g.count);
        std::iota(members.begin(), members.end(), next);
        PeerBehavior b = g.behavior;
        if (auto* s = std::get_if<CollabStatic>(&b.kind)) s->group = members;
        if (auto* r = std::get_if<CollabRotating>(&b.kind)) r->group = members;
        for (PeerId id : members) {
            peers[id].id = id;
            peers[id].behavior = b;
        }
        next += g.count;
    }

    RandomStream loss_rng(derive_seed(c.seed, 0x6c6f7373ULL));
    for (auto& p : peers) {
        p.behavior.loss_rate = loss_rng.uniform(c.loss_rate_range.first, c.loss_rate_range.second);
        p.params = effective_params(c, p.id);
    }

    std::vector<bool> passive(c.n_peers, false);
    for (PeerId id : c.passive) passive[id] = true;
    for (auto& p : peers) p.requester = c.all_request && !passive[p.id];
    if (!c.all_request)
        for (PeerId id : c.requesters) peers[id].requester = !passive[id];

    std::vector<PeerId> active;
    for (const auto& p : peers)
        if (!passive[p.id]) active.push_back(p.id);

    for (auto& p : peers) {
        if (passive[p.id]) continue;
        std::vector<PeerId> others;
        for (PeerId id : active)
            if (id != p.id) others.push_back(id);
        const auto degree = static_cast<std::size_t>(c.neighbor_degree);
        if (degree > 0 && degree < others.size()) {
            RandomStream topo(derive_seed(c.seed, 0x746f706fULL, p.id));
            for (std::size_t i = 0; i < degree; ++i) {
                const auto j = i + topo.below(others.size() - i);
                std::swap(others[i], others[j]);
            }
            others.resize(degree);
            std::sort(others.begin(), others.end());
        }
        p.candidates = std::move(others);
    }
    for (const auto& l : c.candidate_lists) peers[l.requester].candidates = l.providers;

    World world(std::move(peers), c.seed, c.policy, c.request_budget);
    for (const auto& h : c.history) world.seed_history(h.observer, h.subject, h.clean, h.polluted);
    return world;
}

double MetricsReport::mean_goodput() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : summary) {
        if (!s.requester) continue;
        sum += s.goodput;
        ++n;
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

const Trajectory* MetricsReport::trajectory(PeerId observer, PeerId subject) const {
    for (const auto& t : trajectories)
        if (t.pair.observer == observer && t.pair.subject == subject) return &t;
    return nullptr;
}

MetricsReport run_scenario(const ScenarioConfig& config) {
    World world = make_world(config);

    world.set_policy(Policy::open());
    for (std::int64_t r = 0; r < config.warmup_rounds; ++r) world.run_round();
    world.reset_counters();
    world.set_policy(config.policy);
    const std::size_t log_start = world.event_log().size();

    MetricsReport report;
    report.meta.label = config.name;
    report.meta.seed = config.seed;
    report.meta.config_digest = config_digest(config);
    for (const auto& pair : config.observed_pairs) {
        report.trajectories.push_back({pair, {}});
        report.trajectories.back().points.reserve(static_cast<std::size_t>(config.rounds));
    }

    std::vector<std::optional<Round>> observed_detection(config.n_peers);
    for (std::int64_t r = 0; r < config.rounds; ++r) {
        world.run_round();
        for (auto& traj : report.trajectories) {
            const auto b = world.evaluate(traj.pair.observer, traj.pair.subject);
            traj.points.push_back({world.round(), b.direct, b.indirect, b.alpha, b.trust});
            auto& det = observed_detection[traj.pair.subject];
            if (!det && b.trust < world.peer(traj.pair.observer).params.theta_p) det = world.round();
        }
    }

    std::vector<bool> observed(config.n_peers, false);
    for (const auto& p : config.observed_pairs) observed[p.subject] = true;

    report.deliveries = world.event_log().size() - log_start;
    report.summary.reserve(config.n_peers);
    for (PeerId id = 0; id < config.n_peers; ++id) {
        const Peer& p = world.peer(id);
        const PeerCounters& k = world.counters(id);
        PeerSummary s;
        s.peer = id;
        s.behavior = describe(p.behavior);
        s.requester = p.requester && !p.candidates.empty();
        s.goodput = s.requester ? static_cast<double>(k.clean_received) /
                                      static_cast<double>(config.rounds)
                                : 0.0;
        s.polluted_accepted = k.polluted_received;
        s.detection_round = observed[id] ? observed_detection[id] : k.first_flagged;
        s.requests_received = k.requests_received;
        report.summary.push_back(std::move(s));
    }
    return report;
}

}  // namespace pollushield
