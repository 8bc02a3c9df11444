#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pollushield/trust_core.hpp"

using namespace pollushield;

namespace {

TrustParams with_models(ConfidenceModel cf, DirectModel dt) {
    TrustParams p;
    p.cf_model = cf;
    p.dt_model = dt;
    return p;
}

TrustState counts(double clean, double polluted) {
    return TrustState{clean, polluted, clean + polluted, 0};
}

const double kLn2 = std::log(2.0);

}  // namespace

TEST_CASE("confidence factor examples") {
    TrustParams a = with_models(ConfidenceModel::CFDA, DirectModel::PDTM);
    a.c = 1.0;
    CHECK(confidence_factor(counts(0, 0), a) == 0.0);
    CHECK(confidence_factor(counts(1, 0), a) == doctest::Approx(0.5).epsilon(1e-15));

    TrustParams b = with_models(ConfidenceModel::CFDB, DirectModel::PDTM);
    b.beta = 0.5;
    CHECK(confidence_factor(counts(3, 0), b) == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(confidence_factor(counts(0, 0), b) == 0.0);

    TrustParams k = with_models(ConfidenceModel::Constant, DirectModel::PDTM);
    k.cf_constant = 0.3;
    CHECK(confidence_factor(counts(40, 2), k) == 0.3);
}

TEST_CASE("confidence factor grows towards one") {
    for (auto model : {ConfidenceModel::CFDA, ConfidenceModel::CFDB}) {
        TrustParams p = with_models(model, DirectModel::PDTM);
        double prev = confidence_factor(counts(0, 0), p);
        for (double n = 0.25; n < 200.0; n += 0.25) {
            const double f = confidence_factor(counts(n, 0), p);
            CHECK(f >= prev);
            if (prev < 1.0 - 1e-12) CHECK(f > prev);
            prev = f;
        }
        CHECK(confidence_factor(counts(1e6, 0), p) > 0.999);
    }
}

TEST_CASE("direct trust examples") {
    TrustParams pdtm = with_models(ConfidenceModel::CFDA, DirectModel::PDTM);
    pdtm.rho = kLn2;
    pdtm.eta = 1.0;
    CHECK(direct_trust(counts(0, 0), pdtm) == 0.0);
    CHECK(direct_trust(counts(2, 1), pdtm) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    TrustParams dtmb = with_models(ConfidenceModel::CFDA, DirectModel::DTMB);
    CHECK(direct_trust(counts(0, 0), dtmb) == 0.5);

    TrustParams dtma = with_models(ConfidenceModel::CFDA, DirectModel::DTMA);
    for (double k : {0.5, 1.0, 7.0, 1000.0}) CHECK(direct_trust(counts(k, k), dtma) == 0.5);
}

TEST_CASE("DTMA with no evidence falls back to cold start") {
    TrustParams p = with_models(ConfidenceModel::CFDA, DirectModel::DTMA);
    p.cold_start_trust = 0.37;
    CHECK(direct_trust(counts(0, 0), p) == 0.37);
}

TEST_CASE("direct trust is monotone in clean and polluted evidence") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 200.0);
    std::uniform_real_distribution<double> step(0.0, 5.0);
    for (auto model : {DirectModel::DTMA, DirectModel::DTMB, DirectModel::PDTM}) {
        TrustParams p = with_models(ConfidenceModel::CFDA, model);
        for (int i = 0; i < 2000; ++i) {
            const double c = u(gen), q = u(gen), d = step(gen);
            if (model == DirectModel::DTMA && c + q == 0.0) continue;
            CHECK(direct_trust(counts(c + d, q), p) >= direct_trust(counts(c, q), p));
            CHECK(direct_trust(counts(c, q + d), p) <= direct_trust(counts(c, q), p));
        }
    }
}

TEST_CASE("every trust-like output stays in the unit interval") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1e6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto cf : {ConfidenceModel::CFDA, ConfidenceModel::CFDB, ConfidenceModel::Constant})
        for (auto dt : {DirectModel::DTMA, DirectModel::DTMB, DirectModel::PDTM}) {
            TrustParams p = with_models(cf, dt);
            for (int i = 0; i < 500; ++i) {
                TrustState s{u(gen), u(gen), u(gen), 0};
                const double d = direct_trust(s, p);
                const double a = confidence_factor(s, p);
                CHECK((d >= 0.0 && d <= 1.0));
                CHECK((a >= 0.0 && a <= 1.0));
                const double t = combine_trust(d, unit(gen), a, p.cold_start_trust);
                CHECK((t >= 0.0 && t <= 1.0));
                const double pr = transaction_probability(t, p);
                CHECK((pr >= 0.0 && pr <= 1.0));
            }
        }
}

TEST_CASE("indirect trust examples") {
    const std::vector<Recommendation> one{{0.7, 0.9}};
    CHECK(*indirect_trust(one) == doctest::Approx(0.9).epsilon(1e-15));
    const std::vector<Recommendation> split{{1.0, 1.0}, {1.0, 0.0}};
    CHECK(*indirect_trust(split) == 0.5);
    CHECK_FALSE(indirect_trust({}).has_value());
    const std::vector<Recommendation> silent{{0.0, 0.4}, {0.0, 0.9}};
    CHECK_FALSE(indirect_trust(silent).has_value());
}

TEST_CASE("indirect trust matches a weighted mean and stays within the values") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 25);
    for (int i = 0; i < 2000; ++i) {
        std::vector<Recommendation> recs(static_cast<std::size_t>(size(gen)));
        double num = 0.0, den = 0.0, lo = 1.0, hi = 0.0;
        for (auto& r : recs) {
            r = {unit(gen), unit(gen)};
            num += r.credibility * r.value;
            den += r.credibility;
            lo = std::min(lo, r.value);
            hi = std::max(hi, r.value);
        }
        const auto got = indirect_trust(recs);
        REQUIRE(got.has_value());
        CHECK(*got >= lo);
        CHECK(*got <= hi);
        CHECK(*got == doctest::Approx(num / den).epsilon(1e-12));
    }
}

TEST_CASE("combine trust examples and convexity") {
    CHECK(combine_trust(1.0, 0.0, 1.0, 0.5) == 1.0);
    CHECK(combine_trust(1.0, 0.0, 0.0, 0.5) == 0.0);
    CHECK(combine_trust(0.8, 0.4, 0.5, 0.5) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(combine_trust(0.8, std::nullopt, 0.5, 0.5) == doctest::Approx(0.65).epsilon(1e-15));

    std::mt19937_64 gen(14);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double d = unit(gen), in = unit(gen), a = unit(gen);
        const double t = combine_trust(d, in, a, 0.5);
        CHECK(t >= std::min(d, in));
        CHECK(t <= std::max(d, in));
    }
}

TEST_CASE("decay examples") {
    TrustParams p;
    p.lambda = 0.3;
    p.mu = 0.1;
    const TrustState s{4.0, 2.0, 6.0, 7};
    CHECK(apply_decay(s, 7, p) == s);

    TrustParams none;
    TrustState moved = apply_decay(s, 50, none);
    CHECK(moved.n_clean == 4.0);
    CHECK(moved.n_polluted == 2.0);
    CHECK(moved.n_transactions == 6.0);
    CHECK(moved.last_update == 50);

    TrustParams half;
    half.lambda = kLn2;
    const TrustState ten{10.0, 0.0, 10.0, 0};
    CHECK(apply_decay(ten, 1, half).n_clean == doctest::Approx(5.0).epsilon(1e-14));

    CHECK_THROWS_AS(apply_decay(s, 6, p), TrustError);
}

TEST_CASE("decay forgets clean evidence faster than polluted evidence") {
    std::mt19937_64 gen(15);
    std::uniform_real_distribution<double> rate(1e-3, 1.0);
    std::uniform_real_distribution<double> amount(1e-3, 100.0);
    std::uniform_int_distribution<Round> dt(1, 500);
    for (int i = 0; i < 2000; ++i) {
        TrustParams p;
        p.mu = rate(gen);
        p.lambda = p.mu + rate(gen);
        const double n = amount(gen);
        const TrustState s{n, n, 2 * n, 0};
        const TrustState d = apply_decay(s, dt(gen), p);
        if (d.n_polluted == 0.0) continue;  // both underflowed
        CHECK(d.n_clean < d.n_polluted);
    }
}

TEST_CASE("record delivery examples") {
    CHECK(record_delivery({0, 0, 0, 3}, ChunkQuality::Clean) == TrustState{1, 0, 1, 3});
    CHECK(record_delivery({1, 0, 1, 3}, ChunkQuality::Polluted) == TrustState{1, 1, 2, 3});
    CHECK(record_delivery({5, 2, 7, 3}, ChunkQuality::Clean) == TrustState{6, 2, 8, 3});
}

TEST_CASE("transaction probability examples and monotonicity") {
    TrustParams p;
    p.theta_p = 0.5;
    p.theta_g = 0.9;
    p.chi = 0.5;
    CHECK(transaction_probability(0.3, p) == 0.0);
    CHECK(transaction_probability(0.7, p) == 0.5);
    CHECK(transaction_probability(0.95, p) == 1.0);
    CHECK(transaction_probability(0.5, p) == 0.5);
    CHECK(transaction_probability(0.9, p) == 1.0);

    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double pr = transaction_probability(i / 1000.0, p);
        CHECK(pr >= prev);
        prev = pr;
    }
}

TEST_CASE("parameter validation") {
    TrustParams ok;
    CHECK(validate(ok).empty());

    TrustParams soft = ok;
    soft.lambda = 0.01;
    soft.mu = 0.02;
    CHECK_FALSE(validate(soft).empty());

    auto bad = [](auto mutate) {
        TrustParams p;
        mutate(p);
        CHECK_THROWS_AS(validate(p), TrustError);
    };
    bad([](TrustParams& p) { p.c = 0.0; });
    bad([](TrustParams& p) { p.beta = 1.0; });
    bad([](TrustParams& p) { p.rho = -1.0; });
    bad([](TrustParams& p) { p.eta = 0.0; });
    bad([](TrustParams& p) { p.theta_p = 0.95; });
    bad([](TrustParams& p) { p.chi = 1.5; });
    bad([](TrustParams& p) { p.k_providers = 0; });
    bad([](TrustParams& p) { p.mu = -0.1; });
    bad([](TrustParams& p) {
        p.cf_model = ConfidenceModel::Constant;
        p.cf_constant = 2.0;
    });
}

TEST_CASE("on-off margin examples") {
    TrustParams p;
    p.dt_model = DirectModel::PDTM;
    p.eta = 1.0;
    const TrustState s = counts(5, 0);

    p.rho = kLn2;
    OnOffMargin m = onoff_resistance_margin(s, 1, p);
    CHECK(m.bound == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(m.resistant);

    p.rho = 1.0;
    m = onoff_resistance_margin(s, 1, p);
    CHECK(m.bound == doctest::Approx(1.2642).epsilon(1e-4));
    CHECK(m.resistant);

    p.rho = 0.1;
    CHECK_FALSE(onoff_resistance_margin(s, 1, p).resistant);

    CHECK_THROWS_AS(onoff_resistance_margin(counts(0, 3), 1, p), TrustError);
    CHECK_THROWS_AS(onoff_resistance_margin(s, 0, p), TrustError);
    TrustParams dtma = p;
    dtma.dt_model = DirectModel::DTMA;
    CHECK_THROWS_AS(onoff_resistance_margin(s, 1, dtma), TrustError);
}

TEST_CASE("on-off margin agrees with trust differences") {
    std::mt19937_64 gen(16);
    std::uniform_real_distribution<double> nc(0.5, 1e3);
    std::uniform_real_distribution<double> np(0.0, 5.0);
    std::uniform_real_distribution<double> eta(0.05, 10.0);
    std::uniform_real_distribution<double> eps(1e-3, 2.0);
    std::uniform_int_distribution<int> chunks(1, 50);
    for (int i = 0; i < 2000; ++i) {
        TrustParams p;
        p.eta = eta(gen);
        p.rho = onoff_rho_threshold(p.eta) + eps(gen);
        const TrustState s = counts(nc(gen), np(gen));
        const int n = chunks(gen);
        const OnOffMargin m = onoff_resistance_margin(s, n, p);

        const double d0 = direct_trust(s, p);
        const double drop = d0 - direct_trust(counts(s.n_clean, s.n_polluted + n), p);
        const double gain = direct_trust(counts(s.n_clean + n, s.n_polluted), p) - d0;
        CHECK(m.drop == doctest::Approx(drop).epsilon(1e-9));
        CHECK(m.gain == doctest::Approx(gain).epsilon(1e-9));
        if (gain > 1e-200) CHECK(m.ratio == doctest::Approx(drop / gain).epsilon(1e-8));
    }
}

TEST_CASE("on-off resistance holds where the bound's algebra applies") {
    // The chain ratio >= (1-e^{-rho N})(eta+N) > 1 needs
    // n_clean (n_clean + N + eta) >= eta N (eta + N).
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> nc(1e-6, 1e3);
    std::uniform_real_distribution<double> np(0.0, 1e2);
    std::uniform_real_distribution<double> eta(1e-6, 10.0);
    std::uniform_real_distribution<double> eps(1e-9, 2.0);
    std::uniform_int_distribution<int> chunks(1, 50);
    int checked = 0;
    for (int i = 0; i < 20000; ++i) {
        TrustParams p;
        p.eta = eta(gen);
        p.rho = onoff_rho_threshold(p.eta) + eps(gen);
        const TrustState s = counts(nc(gen), np(gen));
        const int n = chunks(gen);
        if (s.n_clean * (s.n_clean + n + p.eta) < p.eta * n * (p.eta + n)) continue;
        ++checked;
        const OnOffMargin m = onoff_resistance_margin(s, n, p);
        CHECK(m.resistant);
        CHECK(m.ratio >= m.bound - 1e-12);
        CHECK(m.ratio > 1.0 - 1e-12);
    }
    CHECK(checked > 10000);
}

TEST_CASE("on-off margin falls below one for thin clean evidence") {
    TrustParams p;
    p.eta = 1.0;
    p.rho = kLn2 + 1e-3;
    const OnOffMargin m = onoff_resistance_margin(counts(0.1, 0), 1, p);
    CHECK(m.resistant);
    CHECK(m.ratio < 1.0);
    CHECK(m.ratio < m.bound);
    CHECK(m.ratio == doctest::Approx(-std::expm1(-p.rho) * 0.1 * 2.1).epsilon(1e-12));
}
