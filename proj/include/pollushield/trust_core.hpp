// Trust formulas for pollution-resistant P2P streaming.
//
// Everything here is a pure function of its arguments. A TrustState holds the
// decayed evidence one peer keeps about another; TrustParams holds the tunable
// constants shared by a peer's trust manager.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace pollushield {

using Round = std::int64_t;

struct TrustState {
    double n_clean = 0.0;
    double n_polluted = 0.0;
    double n_transactions = 0.0;
    Round last_update = 0;

    friend bool operator==(const TrustState&, const TrustState&) = default;
};

enum class ConfidenceModel { CFDA, CFDB, Constant };
enum class DirectModel { DTMA, DTMB, PDTM };
enum class ChunkQuality { Clean, Polluted };

struct TrustParams {
    ConfidenceModel cf_model = ConfidenceModel::CFDA;
    double cf_constant = 0.5;  // used when cf_model == Constant
    double c = 1.0;
    double beta = 0.5;
    DirectModel dt_model = DirectModel::PDTM;
    double rho = 0.69314718055994529;  // ln(1 + 1/eta) for eta = 1
    double eta = 1.0;
    double lambda = 0.0;
    double mu = 0.0;
    double theta_p = 0.5;
    double theta_g = 0.9;
    double chi = 0.5;
    int k_providers = 4;
    int k_recommenders = 10;
    double cold_start_trust = 0.5;

    friend bool operator==(const TrustParams&, const TrustParams&) = default;
};

class TrustError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checks parameter domains and throws TrustError on violation. Returns a
/// warning message (empty when none) for the soft lambda > mu requirement.
std::string validate(const TrustParams& params);

/// ln(1 + 1/eta): the smallest rho (exclusive) for which PDTM resists on-off.
double onoff_rho_threshold(double eta);

double confidence_factor(const TrustState& state, const TrustParams& params);

double direct_trust(const TrustState& state, const TrustParams& params);

struct Recommendation {
    double credibility = 0.0;
    double value = 0.0;
};

/// Credibility-weighted mean of the recommendation values. Returns nullopt
/// (no evidence) for an empty list or when every credibility is zero.
std::optional<double> indirect_trust(std::span<const Recommendation> recommendations);

double combine_trust(double direct, std::optional<double> indirect, double alpha,
                     double cold_start_trust);

/// Ages the counters to `now`. Clean evidence and the transaction count fade
/// with lambda, polluted evidence with mu. Throws TrustError if now precedes
/// state.last_update.
TrustState apply_decay(const TrustState& state, Round now, const TrustParams& params);

TrustState record_delivery(const TrustState& state, ChunkQuality quality);

/// Double-threshold admission probability.
double transaction_probability(double trust, const TrustParams& params);

struct OnOffMargin {
    double drop = 0.0;   // trust lost to N further polluted chunks
    double gain = 0.0;   // trust gained from N further clean chunks
    double ratio = 0.0;  // drop / gain
    double bound = 0.0;  // (1 - e^{-rho N}) (eta + N)
    bool resistant = false;
};

/// Compares how far PDTM trust falls after `n_chunks` polluted chunks with how
/// far it rises after as many clean ones. Requires the PDTM model and
/// state.n_clean > 0.
OnOffMargin onoff_resistance_margin(const TrustState& state, int n_chunks,
                                    const TrustParams& params);

std::string to_string(ConfidenceModel model);
std::string to_string(DirectModel model);
std::string to_string(ChunkQuality quality);

}  // namespace pollushield
