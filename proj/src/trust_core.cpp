#include "pollushield/trust_core.hpp"

#include <algorithm>
#include <cmath>

namespace pollushield {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::string validate(const TrustParams& p) {
    if (p.cf_model == ConfidenceModel::Constant && !in_unit(p.cf_constant))
        throw TrustError("constant confidence factor must lie in [0,1]");
    if (!(p.c > 0.0)) throw TrustError("CFDA constant c must be positive");
    if (!(p.beta > 0.0 && p.beta < 1.0)) throw TrustError("CFDB beta must lie in (0,1)");
    if (!(p.rho > 0.0)) throw TrustError("PDTM rho must be positive");
    if (!(p.eta > 0.0)) throw TrustError("PDTM eta must be positive");
    if (!(p.lambda >= 0.0) || !(p.mu >= 0.0))
        throw TrustError("forgetting and forgiving factors must be non-negative");
    if (!in_unit(p.theta_p) || !in_unit(p.theta_g) || !in_unit(p.chi))
        throw TrustError("thresholds and chi must lie in [0,1]");
    if (p.theta_p > p.theta_g) throw TrustError("theta_p must not exceed theta_g");
    if (p.k_providers < 1 || p.k_recommenders < 1)
        throw TrustError("top-K sizes must be positive");
    if (!in_unit(p.cold_start_trust)) throw TrustError("cold_start_trust must lie in [0,1]");

    if ((p.lambda > 0.0 || p.mu > 0.0) && !(p.lambda > p.mu))
        return "forgetting factor does not exceed forgiving factor; polluted evidence "
               "will not outlive clean evidence";
    return {};
}

double onoff_rho_threshold(double eta) { return std::log1p(1.0 / eta); }

double confidence_factor(const TrustState& state, const TrustParams& params) {
    const double n = state.n_transactions;
    switch (params.cf_model) {
    case ConfidenceModel::CFDA:
        return clamp_unit(n / (n + params.c));
    case ConfidenceModel::CFDB:
        return clamp_unit(-std::expm1(n * std::log(params.beta)));
    case ConfidenceModel::Constant:
        return params.cf_constant;
    }
    return 0.0;
}

double direct_trust(const TrustState& state, const TrustParams& params) {
    const double nc = state.n_clean;
    const double np = state.n_polluted;
    switch (params.dt_model) {
    case DirectModel::DTMA:
        if (nc + np <= 0.0) return params.cold_start_trust;
        return clamp_unit(nc / (nc + np));
    case DirectModel::DTMB:
        return clamp_unit((nc + 1.0) / (nc + np + 2.0));
    case DirectModel::PDTM:
        return clamp_unit(std::exp(-params.rho * np) * nc / (nc + params.eta));
    }
    return 0.0;
}

std::optional<double> indirect_trust(std::span<const Recommendation> recommendations) {
    double weighted = 0.0;
    double total = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    for (const auto& r : recommendations) {
        if (r.credibility <= 0.0) continue;
        weighted += r.credibility * r.value;
        total += r.credibility;
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
    }
    if (total <= 0.0) return std::nullopt;
    // Rounding in the quotient may step just outside the convex hull.
    return std::clamp(weighted / total, lo, hi);
}

double combine_trust(double direct, std::optional<double> indirect, double alpha,
                     double cold_start_trust) {
    const double other = indirect.value_or(cold_start_trust);
    const double t = alpha * direct + (1.0 - alpha) * other;
    return std::clamp(t, std::min(direct, other), std::max(direct, other));
}

TrustState apply_decay(const TrustState& state, Round now, const TrustParams& params) {
    if (now < state.last_update)
        throw TrustError("time regression: decay requested at round " + std::to_string(now) +
                         " for state last updated at round " +
                         std::to_string(state.last_update));
    TrustState out = state;
    out.last_update = now;
    const auto dt = static_cast<double>(now - state.last_update);
    if (dt == 0.0) return out;
    const double forget = std::exp(-params.lambda * dt);
    const double forgive = std::exp(-params.mu * dt);
    out.n_clean *= forget;
    out.n_transactions *= forget;
    out.n_polluted *= forgive;
    return out;
}

TrustState record_delivery(const TrustState& state, ChunkQuality quality) {
    TrustState out = state;
    if (quality == ChunkQuality::Clean)
        out.n_clean += 1.0;
    else
        out.n_polluted += 1.0;
    out.n_transactions += 1.0;
    return out;
}

double transaction_probability(double trust, const TrustParams& params) {
    if (trust < params.theta_p) return 0.0;
    if (trust < params.theta_g) return params.chi;
    return 1.0;
}

OnOffMargin onoff_resistance_margin(const TrustState& state, int n_chunks,
                                    const TrustParams& params) {
    if (params.dt_model != DirectModel::PDTM)
        throw TrustError("on-off resistance margin is defined for PDTM only");
    if (!(state.n_clean > 0.0))
        throw TrustError("degenerate state: on-off margin needs n_clean > 0");
    if (n_chunks < 1) throw TrustError("on-off margin needs at least one chunk");

    const double nc = state.n_clean;
    const double n = n_chunks;
    const double eta = params.eta;
    const double rho = params.rho;
    const double keep = std::exp(-rho * state.n_polluted);
    const double burst = -std::expm1(-rho * n);  // 1 - e^{-rho N}

    OnOffMargin m;
    m.drop = keep * burst * nc / (nc + eta);
    m.gain = keep * eta * n / ((nc + eta) * (nc + n + eta));
    // Closed form with e^{-rho Np} cancelled, finite even when keep underflows.
    m.ratio = burst * nc * (nc + n + eta) / (eta * n);
    m.bound = burst * (eta + n);
    m.resistant = rho > onoff_rho_threshold(eta);
    return m;
}

std::string to_string(ConfidenceModel model) {
    switch (model) {
    case ConfidenceModel::CFDA: return "cfda";
    case ConfidenceModel::CFDB: return "cfdb";
    case ConfidenceModel::Constant: return "constant";
    }
    return "?";
}

std::string to_string(DirectModel model) {
    switch (model) {
    case DirectModel::DTMA: return "dtma";
    case DirectModel::DTMB: return "dtmb";
    case DirectModel::PDTM: return "pdtm";
    }
    return "?";
}

std::string to_string(ChunkQuality quality) {
    return quality == ChunkQuality::Clean ? "clean" : "polluted";
}

}  // namespace pollushield
