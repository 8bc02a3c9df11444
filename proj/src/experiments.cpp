// Scenario builders for the six reference experiments.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pollushield/scenarios.hpp"

namespace pollushield {

namespace {

TrustParams default_params() {
    TrustParams p;
    p.cf_model = ConfidenceModel::CFDA;
    p.c = 1.0;
    p.dt_model = DirectModel::PDTM;
    p.eta = 1.0;
    p.rho = onoff_rho_threshold(p.eta);
    p.theta_p = 0.5;
    p.theta_g = 0.9;
    p.chi = 0.5;
    return p;
}

/// Forgetting and forgiving rates for the network-scale experiments.
constexpr double kLambda = 0.02;
constexpr double kMu = 0.01;
/// Open-policy rounds that build up working relations before measurement.
constexpr std::int64_t kWarmupRounds = 60;

PeerBehavior behavior(BehaviorKind kind) { return PeerBehavior{std::move(kind), 0.0}; }

/// Expands (behavior, count) pairs into a seeded random id assignment and
/// re-compresses runs of equal behaviors.
std::vector<BehaviorGroup> shuffled_mix(const std::vector<BehaviorGroup>& groups,
                                        std::uint64_t seed) {
    std::vector<const PeerBehavior*> seq;
    for (const auto& g : groups)
        for (std::uint32_t i = 0; i < g.count; ++i) seq.push_back(&g.behavior);
    RandomStream rng(derive_seed(seed, 0x6d6978ULL));
    for (std::size_t i = seq.size(); i > 1; --i) std::swap(seq[i - 1], seq[rng.below(i)]);

    std::vector<BehaviorGroup> out;
    for (const auto* b : seq) {
        if (!out.empty() && out.back().behavior == *b)
            ++out.back().count;
        else
            out.push_back({*b, 1});
    }
    return out;
}

/// Honest peers plus a malicious share split evenly between persistent
/// polluters and 20% on-off attackers.
std::vector<BehaviorGroup> pollution_mix(std::uint32_t n, double malicious_fraction) {
    const auto malicious = static_cast<std::uint32_t>(std::lround(n * malicious_fraction));
    const std::uint32_t persistent = malicious / 2;
    const std::uint32_t onoff = malicious - persistent;
    std::vector<BehaviorGroup> g;
    if (n > malicious) g.push_back({behavior(Honest{}), n - malicious});
    if (persistent > 0) g.push_back({behavior(PersistentPolluter{}), persistent});
    if (onoff > 0) g.push_back({behavior(OnOff{0.2}), onoff});
    return g;
}

std::string fmt_label(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

std::string policy_label(const Policy& p) {
    switch (p.kind) {
    case Policy::Kind::Proposed: return "double";
    case Policy::Kind::SingleThreshold: return "single";
    case Policy::Kind::PeerTrustBaseline: return "peertrust";
    case Policy::Kind::Open: return "open";
    }
    return "?";
}

// Constant vs dynamic confidence under bad-mouthing. Peers 0 (constant 0.5)
// and 1 (CFDA) download from honest peer 2; peers 3..10 slander peer 2 on
// every enquiry and peers 11..12 recommend honestly.
ScenarioConfig build_e1(const ExperimentOverrides& o) {
    ScenarioConfig c;
    c.name = "e1";
    c.n_peers = 13;
    c.rounds = o.rounds.value_or(50);
    c.seed = o.seed.value_or(1);
    c.params = default_params();
    c.params.dt_model = DirectModel::DTMA;
    c.params.k_recommenders = 10;
    TrustParams constant = c.params;
    constant.cf_model = ConfidenceModel::Constant;
    constant.cf_constant = 0.5;
    c.param_overrides.push_back({0, constant});

    c.behavior_mix = {{behavior(Honest{}), 3},
                      {behavior(BadMouther{{2}, 1.0}), 8},
                      {behavior(Honest{}), 2}};
    c.policy = o.policy.value_or(Policy::open());
    c.all_request = false;
    c.requesters = {0, 1};
    c.candidate_lists = {{0, {2}}, {1, {2}}};
    for (PeerId k = 3; k < 13; ++k) {
        c.history.push_back({0, k, 10, 0});
        c.history.push_back({1, k, 10, 0});
        c.history.push_back({k, 2, 10, 0});
    }
    c.observed_pairs = {{0, 2}, {1, 2}};
    return c;
}

// On-off attackers against DTMA (victim 0) and PDTM (victim 1). Attackers
// 2, 3, 4 run 50%, 20% and 10% cycles independently against each victim.
ScenarioConfig build_e2(const ExperimentOverrides& o) {
    ScenarioConfig c;
    c.name = "e2";
    c.n_peers = 5;
    c.rounds = o.rounds.value_or(50);
    c.seed = o.seed.value_or(1);
    c.params = default_params();
    c.params.k_providers = 3;
    TrustParams dtma = c.params;
    dtma.dt_model = DirectModel::DTMA;
    c.param_overrides.push_back({0, dtma});
    c.behavior_mix = {{behavior(Honest{}), 2},
                      {behavior(OnOff{0.5}), 1},
                      {behavior(OnOff{0.2}), 1},
                      {behavior(OnOff{0.1}), 1}};
    c.policy = o.policy.value_or(Policy::open());
    c.request_budget = 3;
    c.all_request = false;
    c.requesters = {0, 1};
    c.candidate_lists = {{0, {2, 3, 4}}, {1, {2, 3, 4}}};
    for (PeerId v : {0u, 1u})
        for (PeerId a : {2u, 3u, 4u}) c.observed_pairs.push_back({v, a});
    return c;
}

ScenarioConfig network_base(const std::string& name, const ExperimentOverrides& o,
                            double malicious_fraction) {
    ScenarioConfig c;
    c.name = name;
    c.n_peers = o.n_peers.value_or(500);
    c.rounds = o.rounds.value_or(100);
    c.warmup_rounds = kWarmupRounds;
    c.seed = o.seed.value_or(1);
    c.params = default_params();
    c.params.lambda = kLambda;
    c.params.mu = kMu;
    c.params.k_providers = 4;
    c.params.k_recommenders = 10;
    c.neighbor_degree = 20;
    c.behavior_mix =
        shuffled_mix(pollution_mix(c.n_peers, o.malicious_fraction.value_or(malicious_fraction)),
                     c.seed);
    return c;
}

// Single threshold 0.8 vs double threshold under network loss.
ScenarioConfig build_e3(const ExperimentOverrides& o) {
    ScenarioConfig c = network_base("e3", o, 0.2);
    const double loss = o.loss_rate.value_or(0.0);
    c.loss_rate_range = {loss, loss};
    c.policy = o.policy.value_or(Policy::proposed());
    return c;
}

// Collaborative attacks. Victim 0 faces a static group (1..10, peer 1
// pollutes); victim 11 a rotating group of ten (12..21); victim 22 a rotating
// group of five (23..27). Group members share prior clean history so they can
// vouch for each other.
ScenarioConfig build_e4(const ExperimentOverrides& o) {
    ScenarioConfig c;
    c.name = "e4";
    c.n_peers = 28;
    c.rounds = o.rounds.value_or(200);
    c.seed = o.seed.value_or(1);
    c.params = default_params();
    c.params.k_providers = 10;
    c.params.k_recommenders = 10;
    c.behavior_mix = {{behavior(Honest{}), 1},
                      {behavior(CollabStatic{{}, 0}), 10},
                      {behavior(Honest{}), 1},
                      {behavior(CollabRotating{{}, 1}), 10},
                      {behavior(Honest{}), 1},
                      {behavior(CollabRotating{{}, 1}), 5}};
    c.policy = o.policy.value_or(Policy::open());
    c.request_budget = 10;
    c.all_request = false;
    c.requesters = {0, 11, 22};
    auto group = [&](PeerId victim, PeerId first, PeerId size) {
        CandidateList l{victim, {}};
        for (PeerId a = first; a < first + size; ++a) {
            l.providers.push_back(a);
            for (PeerId b = first; b < first + size; ++b)
                if (a != b) c.history.push_back({a, b, 10, 0});
        }
        c.candidate_lists.push_back(l);
    };
    group(0, 1, 10);
    group(11, 12, 10);
    group(22, 23, 5);
    c.observed_pairs = {{0, 1}, {0, 2}, {11, 21}, {22, 27}};
    return c;
}

// Request distribution vs trust. Peers 0..n-2 trade with each other, each
// requesting from its top K providers every round; the last peer is a passive
// newcomer introduced to the honest part of the population, so it sees the
// malicious peers only through recommendations.
ScenarioConfig build_e5(const ExperimentOverrides& o) {
    ScenarioConfig c;
    c.name = "e5";
    const std::uint32_t population = o.n_peers.value_or(101) - 1;
    c.n_peers = population + 1;
    c.rounds = o.rounds.value_or(100);
    c.warmup_rounds = kWarmupRounds;
    c.seed = o.seed.value_or(1);
    c.params = default_params();
    c.params.lambda = kLambda;
    c.params.mu = kMu;
    c.params.k_providers = 4;
    c.params.k_recommenders = 10;
    c.request_budget = 4;
    c.neighbor_degree = 10;
    c.loss_rate_range = {0.0, 0.02};
    c.policy = o.policy.value_or(Policy::proposed());
    c.behavior_mix =
        shuffled_mix(pollution_mix(population, o.malicious_fraction.value_or(0.4)), c.seed);
    c.behavior_mix.push_back({behavior(Honest{}), 1});
    const PeerId newcomer = population;
    c.passive = {newcomer};

    TrustParams fresh = c.params;
    fresh.lambda = 0.0;
    fresh.mu = 0.0;
    fresh.k_recommenders = population;
    c.param_overrides.push_back({newcomer, fresh});

    PeerId id = 0;
    for (const auto& g : c.behavior_mix)
        for (std::uint32_t i = 0; i < g.count; ++i, ++id)
            if (id != newcomer && !g.behavior.is_malicious())
                c.history.push_back({newcomer, id, 10, 0});
    for (PeerId j = 0; j < population; ++j) c.observed_pairs.push_back({newcomer, j});
    return c;
}

// Proposed system vs the PeerTrust-style baseline as the malicious share grows.
ScenarioConfig build_e6(const ExperimentOverrides& o) {
    ScenarioConfig c = network_base("e6", o, 0.0);
    c.loss_rate_range = {0.0, 0.02};
    if (o.loss_rate) c.loss_rate_range = {*o.loss_rate, *o.loss_rate};
    c.policy = o.policy.value_or(Policy::proposed());
    return c;
}

}  // namespace

std::optional<ExperimentId> parse_experiment_id(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (t == "e1") return ExperimentId::E1;
    if (t == "e2") return ExperimentId::E2;
    if (t == "e3") return ExperimentId::E3;
    if (t == "e4") return ExperimentId::E4;
    if (t == "e5") return ExperimentId::E5;
    if (t == "e6") return ExperimentId::E6;
    return std::nullopt;
}

std::string to_string(ExperimentId id) {
    return "e" + std::to_string(static_cast<int>(id) + 1);
}

ScenarioConfig build_experiment(ExperimentId id, const ExperimentOverrides& overrides) {
    ScenarioConfig c;
    switch (id) {
    case ExperimentId::E1: c = build_e1(overrides); break;
    case ExperimentId::E2: c = build_e2(overrides); break;
    case ExperimentId::E3: c = build_e3(overrides); break;
    case ExperimentId::E4: c = build_e4(overrides); break;
    case ExperimentId::E5: c = build_e5(overrides); break;
    case ExperimentId::E6: c = build_e6(overrides); break;
    default: throw ConfigError("unknown experiment id");
    }
    validate(c);
    return c;
}

std::vector<LabeledConfig> experiment_plan(ExperimentId id, const ExperimentOverrides& overrides) {
    std::vector<LabeledConfig> plan;
    auto add = [&](std::string label, ExperimentOverrides o) {
        ScenarioConfig c = build_experiment(id, o);
        c.name = label;
        plan.push_back({std::move(label), std::move(c)});
    };
    switch (id) {
    case ExperimentId::E3: {
        const std::vector<Policy> policies =
            overrides.policy ? std::vector<Policy>{*overrides.policy}
                             : std::vector<Policy>{Policy::proposed(), Policy::single(0.8)};
        std::vector<double> losses(std::begin(kE3LossRates), std::end(kE3LossRates));
        if (overrides.loss_rate) losses = {*overrides.loss_rate};
        for (double loss : losses)
            for (const auto& pol : policies) {
                ExperimentOverrides o = overrides;
                o.loss_rate = loss;
                o.policy = pol;
                add("e3_loss" + fmt_label(loss) + "_" + policy_label(pol), o);
            }
        break;
    }
    case ExperimentId::E6: {
        const std::vector<Policy> policies =
            overrides.policy ? std::vector<Policy>{*overrides.policy}
                             : std::vector<Policy>{Policy::proposed(), Policy::peertrust()};
        std::vector<double> fractions(std::begin(kE6MaliciousFractions),
                                      std::end(kE6MaliciousFractions));
        if (overrides.malicious_fraction) fractions = {*overrides.malicious_fraction};
        for (double f : fractions)
            for (const auto& pol : policies) {
                ExperimentOverrides o = overrides;
                o.malicious_fraction = f;
                o.policy = pol;
                add("e6_mal" + fmt_label(f) + "_" + policy_label(pol), o);
            }
        break;
    }
    default:
        add(to_string(id), overrides);
    }
    return plan;
}

}  // namespace pollushield
