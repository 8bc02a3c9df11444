// Declarative scenario descriptions, the experiment library, and the driver
// that turns a scenario into a metrics report.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pollushield/behaviors.hpp"
#include "pollushield/sim_engine.hpp"
#include "pollushield/trust_core.hpp"

namespace pollushield {

inline constexpr const char* kEngineVersion = "pollushield 1.0.0";

struct BehaviorGroup {
    PeerBehavior behavior;
    std::uint32_t count = 1;
    friend bool operator==(const BehaviorGroup&, const BehaviorGroup&) = default;
};

struct ParamOverride {
    PeerId peer = 0;
    TrustParams params;
    friend bool operator==(const ParamOverride&, const ParamOverride&) = default;
};

struct CandidateList {
    PeerId requester = 0;
    std::vector<PeerId> providers;
    friend bool operator==(const CandidateList&, const CandidateList&) = default;
};

struct HistorySeed {
    PeerId observer = 0;
    PeerId subject = 0;
    std::uint64_t clean = 0;
    std::uint64_t polluted = 0;
    friend bool operator==(const HistorySeed&, const HistorySeed&) = default;
};

struct ObservedPair {
    PeerId observer = 0;
    PeerId subject = 0;
    friend bool operator==(const ObservedPair&, const ObservedPair&) = default;
};

/// Full description of one simulation run. Peers receive ids in the order of
/// behavior_mix. Members of a collaborative entry form one group.
struct ScenarioConfig {
    std::string name = "scenario";
    std::uint32_t n_peers = 0;
    std::int64_t rounds = 0;         // measured rounds
    std::int64_t warmup_rounds = 0;  // unmeasured rounds run under Policy::open()
    std::uint64_t seed = 1;
    std::vector<BehaviorGroup> behavior_mix;
    TrustParams params;
    std::vector<ParamOverride> param_overrides;
    std::pair<double, double> loss_rate_range{0.0, 0.0};
    std::vector<ObservedPair> observed_pairs;
    Policy policy;
    int request_budget = 1;
    bool all_request = true;
    std::vector<PeerId> requesters;  // used when all_request is false
    std::vector<PeerId> passive;     // neither request nor advertise
    int neighbor_degree = 0;         // 0: every active peer advertises to every other
    std::vector<CandidateList> candidate_lists;  // replaces generated candidates
    std::vector<HistorySeed> history;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws ConfigError describing the first violated invariant.
void validate(const ScenarioConfig& config);

/// Parameters a peer runs with, after per-peer overrides and the baseline
/// policy's fixed model choices.
TrustParams effective_params(const ScenarioConfig& config, PeerId peer);

/// DTMA, constant confidence 0.5, no forgetting or forgiving.
TrustParams peertrust_baseline_params(TrustParams params);

World make_world(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Experiments

enum class ExperimentId { E1, E2, E3, E4, E5, E6 };

std::optional<ExperimentId> parse_experiment_id(const std::string& text);
std::string to_string(ExperimentId id);

/// Knobs a caller may change on an experiment. Unset fields keep the
/// experiment's defaults.
struct ExperimentOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> rounds;
    std::optional<std::uint32_t> n_peers;        // E3, E5, E6
    std::optional<double> loss_rate;              // E3: fixed per-peer loss
    std::optional<double> malicious_fraction;     // E3, E6
    std::optional<Policy> policy;
};

/// Base configuration of an experiment (its first variant).
ScenarioConfig build_experiment(ExperimentId id, const ExperimentOverrides& overrides = {});

struct LabeledConfig {
    std::string label;
    ScenarioConfig config;
};

/// Every variant an experiment runs: one config for E1, E2, E4, E5; the
/// loss-rate by policy grid for E3; the malicious-fraction by policy grid for E6.
std::vector<LabeledConfig> experiment_plan(ExperimentId id, const ExperimentOverrides& overrides = {});

inline constexpr double kE3LossRates[] = {0.0, 0.02, 0.04, 0.06, 0.08, 0.10};
inline constexpr double kE6MaliciousFractions[] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};

// ---------------------------------------------------------------------------
// Running

struct TrajectoryPoint {
    Round round = 0;  // 1-based: state after `round` rounds
    double direct = 0.0;
    std::optional<double> indirect;
    double alpha = 0.0;
    double trust = 0.0;
};

struct Trajectory {
    ObservedPair pair;
    std::vector<TrajectoryPoint> points;
};

struct PeerSummary {
    PeerId peer = 0;
    std::string behavior;
    double goodput = 0.0;  // clean chunks received per measured round
    std::uint64_t polluted_accepted = 0;
    std::optional<Round> detection_round;
    std::uint64_t requests_received = 0;
    bool requester = false;
};

struct RunMeta {
    std::string label;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string engine_version = kEngineVersion;
};

struct MetricsReport {
    RunMeta meta;
    std::vector<Trajectory> trajectories;
    std::vector<PeerSummary> summary;
    std::size_t deliveries = 0;

    /// Mean goodput over requesters.
    double mean_goodput() const;
    const Trajectory* trajectory(PeerId observer, PeerId subject) const;
};

MetricsReport run_scenario(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Scenario files: one `key = value` per line, `#` starts a comment.

std::string serialize(const ScenarioConfig& config);
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

/// Applies a single `key = value` assignment using scenario-file syntax.
void set_field(ScenarioConfig& config, const std::string& key, const std::string& value);

/// FNV-1a over the canonical serialization, as 16 hex digits.
std::string config_digest(const ScenarioConfig& config);

}  // namespace pollushield
