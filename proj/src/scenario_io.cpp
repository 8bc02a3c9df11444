#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "pollushield/scenarios.hpp"

namespace pollushield {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw ConfigError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

double parse_double(std::string_view t, std::string_view what) {
    return parse_number<double>(t, what);
}

std::vector<PeerId> parse_ids(const std::vector<std::string>& toks, std::size_t from,
                              std::string_view what) {
    std::vector<PeerId> ids;
    for (std::size_t i = from; i < toks.size(); ++i)
        ids.push_back(parse_number<PeerId>(toks[i], what));
    return ids;
}

std::vector<PeerId> parse_id_csv(std::string_view text, std::string_view what) {
    std::vector<PeerId> ids;
    std::size_t pos = 0;
    while (pos <= text.size() && !text.empty()) {
        const auto comma = text.find(',', pos);
        const auto piece = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        ids.push_back(parse_number<PeerId>(piece, what));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return ids;
}

std::pair<std::string_view, std::string_view> split_kv(std::string_view tok) {
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("expected key=value, got '" + std::string(tok) + "'");
    return {tok.substr(0, eq), tok.substr(eq + 1)};
}

void set_param(TrustParams& p, std::string_view key, std::string_view value) {
    if (key == "cf_model") {
        if (value == "cfda") p.cf_model = ConfidenceModel::CFDA;
        else if (value == "cfdb") p.cf_model = ConfidenceModel::CFDB;
        else if (value == "constant") p.cf_model = ConfidenceModel::Constant;
        else throw ConfigError("unknown cf_model '" + std::string(value) + "'");
    } else if (key == "dt_model") {
        if (value == "dtma") p.dt_model = DirectModel::DTMA;
        else if (value == "dtmb") p.dt_model = DirectModel::DTMB;
        else if (value == "pdtm") p.dt_model = DirectModel::PDTM;
        else throw ConfigError("unknown dt_model '" + std::string(value) + "'");
    } else if (key == "cf_constant") p.cf_constant = parse_double(value, key);
    else if (key == "c") p.c = parse_double(value, key);
    else if (key == "beta") p.beta = parse_double(value, key);
    else if (key == "rho") p.rho = parse_double(value, key);
    else if (key == "eta") p.eta = parse_double(value, key);
    else if (key == "lambda") p.lambda = parse_double(value, key);
    else if (key == "mu") p.mu = parse_double(value, key);
    else if (key == "theta_p") p.theta_p = parse_double(value, key);
    else if (key == "theta_g") p.theta_g = parse_double(value, key);
    else if (key == "chi") p.chi = parse_double(value, key);
    else if (key == "k_providers") p.k_providers = parse_number<int>(value, key);
    else if (key == "k_recommenders") p.k_recommenders = parse_number<int>(value, key);
    else if (key == "cold_start_trust") p.cold_start_trust = parse_double(value, key);
    else throw ConfigError("unknown trust parameter '" + std::string(key) + "'");
}

std::string params_tokens(const TrustParams& p) {
    std::ostringstream os;
    os << "cf_model=" << to_string(p.cf_model) << " cf_constant=" << fmt_double(p.cf_constant)
       << " c=" << fmt_double(p.c) << " beta=" << fmt_double(p.beta)
       << " dt_model=" << to_string(p.dt_model) << " rho=" << fmt_double(p.rho)
       << " eta=" << fmt_double(p.eta) << " lambda=" << fmt_double(p.lambda)
       << " mu=" << fmt_double(p.mu) << " theta_p=" << fmt_double(p.theta_p)
       << " theta_g=" << fmt_double(p.theta_g) << " chi=" << fmt_double(p.chi)
       << " k_providers=" << p.k_providers << " k_recommenders=" << p.k_recommenders
       << " cold_start_trust=" << fmt_double(p.cold_start_trust);
    return os.str();
}

void apply_param_tokens(TrustParams& p, const std::vector<std::string>& toks, std::size_t from) {
    for (std::size_t i = from; i < toks.size(); ++i) {
        auto [k, v] = split_kv(toks[i]);
        set_param(p, k, v);
    }
}

std::string policy_text(const Policy& p) {
    switch (p.kind) {
    case Policy::Kind::Proposed: return "proposed";
    case Policy::Kind::Open: return "open";
    case Policy::Kind::SingleThreshold: return "single:" + fmt_double(p.threshold);
    case Policy::Kind::PeerTrustBaseline: return "peertrust:" + fmt_double(p.threshold);
    }
    return "?";
}

Policy parse_policy(std::string_view text) {
    if (text == "proposed") return Policy::proposed();
    if (text == "open") return Policy::open();
    const auto colon = text.find(':');
    const auto head = text.substr(0, colon);
    const double t = colon == std::string_view::npos ? 0.8 : parse_double(text.substr(colon + 1), "policy threshold");
    if (head == "single") return Policy::single(t);
    if (head == "peertrust") return Policy::peertrust(t);
    throw ConfigError("unknown policy '" + std::string(text) + "'");
}

std::string behavior_tokens(const BehaviorGroup& g) {
    std::ostringstream os;
    os << g.count << ' ';
    const auto& k = g.behavior.kind;
    if (std::holds_alternative<Honest>(k)) {
        os << "honest";
    } else if (std::holds_alternative<PersistentPolluter>(k)) {
        os << "persistent";
    } else if (auto* o = std::get_if<OnOff>(&k)) {
        os << "onoff on_ratio=" << fmt_double(o->on_ratio);
    } else if (auto* m = std::get_if<BadMouther>(&k)) {
        os << "badmouther slander_prob=" << fmt_double(m->slander_prob);
        if (!m->targets.empty()) {
            os << " targets=";
            for (std::size_t i = 0; i < m->targets.size(); ++i)
                os << (i ? "," : "") << m->targets[i];
        }
    } else if (auto* s = std::get_if<CollabStatic>(&k)) {
        os << "collab_static designated=" << s->designated_index;
    } else if (auto* r = std::get_if<CollabRotating>(&k)) {
        os << "collab_rotating period=" << r->rotation_period;
    }
    return os.str();
}

BehaviorGroup parse_behavior(const std::vector<std::string>& toks) {
    if (toks.size() < 2) throw ConfigError("behavior needs '<count> <kind> [key=value...]'");
    BehaviorGroup g;
    g.count = parse_number<std::uint32_t>(toks[0], "behavior count");
    const std::string& kind = toks[1];
    auto each_kv = [&](auto&& fn) {
        for (std::size_t i = 2; i < toks.size(); ++i) {
            auto [k, v] = split_kv(toks[i]);
            fn(k, v);
        }
    };
    auto reject = [&](std::string_view k) {
        throw ConfigError("unknown option '" + std::string(k) + "' for behavior " + kind);
    };
    if (kind == "honest") {
        g.behavior.kind = Honest{};
        each_kv([&](auto k, auto) { reject(k); });
    } else if (kind == "persistent") {
        g.behavior.kind = PersistentPolluter{};
        each_kv([&](auto k, auto) { reject(k); });
    } else if (kind == "onoff") {
        OnOff o;
        each_kv([&](auto k, auto v) {
            if (k == "on_ratio") o.on_ratio = parse_double(v, k);
            else reject(k);
        });
        g.behavior.kind = o;
    } else if (kind == "badmouther") {
        BadMouther m;
        each_kv([&](auto k, auto v) {
            if (k == "slander_prob") m.slander_prob = parse_double(v, k);
            else if (k == "targets") m.targets = parse_id_csv(v, "target id");
            else reject(k);
        });
        g.behavior.kind = m;
    } else if (kind == "collab_static") {
        CollabStatic s;
        each_kv([&](auto k, auto v) {
            if (k == "designated") s.designated_index = parse_number<int>(v, k);
            else reject(k);
        });
        g.behavior.kind = s;
    } else if (kind == "collab_rotating") {
        CollabRotating r;
        each_kv([&](auto k, auto v) {
            if (k == "period") r.rotation_period = parse_number<int>(v, k);
            else reject(k);
        });
        g.behavior.kind = r;
    } else {
        throw ConfigError("unknown behavior kind '" + kind + "'");
    }
    return g;
}

void apply_line(ScenarioConfig& c, std::string_view key, std::string_view value) {
    const auto toks = split_ws(value);
    auto need = [&](std::size_t n) {
        if (toks.size() != n)
            throw ConfigError("'" + std::string(key) + "' expects " + std::to_string(n) +
                              " value(s)");
    };
    if (key == "name") {
        c.name = std::string(value);
    } else if (key == "n_peers") {
        need(1);
        c.n_peers = parse_number<std::uint32_t>(toks[0], key);
    } else if (key == "rounds") {
        need(1);
        c.rounds = parse_number<std::int64_t>(toks[0], key);
    } else if (key == "warmup_rounds") {
        need(1);
        c.warmup_rounds = parse_number<std::int64_t>(toks[0], key);
    } else if (key == "seed") {
        need(1);
        c.seed = parse_number<std::uint64_t>(toks[0], key);
    } else if (key == "policy") {
        need(1);
        c.policy = parse_policy(toks[0]);
    } else if (key == "request_budget") {
        need(1);
        c.request_budget = parse_number<int>(toks[0], key);
    } else if (key == "neighbor_degree") {
        need(1);
        c.neighbor_degree = parse_number<int>(toks[0], key);
    } else if (key == "loss_rate_range") {
        need(2);
        c.loss_rate_range = {parse_double(toks[0], key), parse_double(toks[1], key)};
    } else if (key == "loss_rate") {
        need(1);
        const double l = parse_double(toks[0], key);
        c.loss_rate_range = {l, l};
    } else if (key == "requesters") {
        if (toks.size() == 1 && toks[0] == "all") {
            c.all_request = true;
            c.requesters.clear();
        } else {
            c.all_request = false;
            c.requesters = parse_ids(toks, 0, "requester id");
        }
    } else if (key == "passive") {
        c.passive = parse_ids(toks, 0, "passive id");
    } else if (key == "params") {
        apply_param_tokens(c.params, toks, 0);
    } else if (key.starts_with("params.")) {
        need(1);
        set_param(c.params, key.substr(7), toks[0]);
    } else if (key == "override") {
        if (toks.empty()) throw ConfigError("override needs a peer id");
        ParamOverride o;
        o.peer = parse_number<PeerId>(toks[0], "override peer");
        o.params = c.params;
        apply_param_tokens(o.params, toks, 1);
        c.param_overrides.push_back(o);
    } else if (key == "behavior") {
        c.behavior_mix.push_back(parse_behavior(toks));
    } else if (key == "observe") {
        need(2);
        c.observed_pairs.push_back({parse_number<PeerId>(toks[0], "observer"),
                                    parse_number<PeerId>(toks[1], "subject")});
    } else if (key == "candidates") {
        if (toks.empty()) throw ConfigError("candidates needs a requester id");
        c.candidate_lists.push_back(
            {parse_number<PeerId>(toks[0], "requester"), parse_ids(toks, 1, "provider id")});
    } else if (key == "history") {
        need(4);
        c.history.push_back({parse_number<PeerId>(toks[0], "observer"),
                             parse_number<PeerId>(toks[1], "subject"),
                             parse_number<std::uint64_t>(toks[2], "clean"),
                             parse_number<std::uint64_t>(toks[3], "polluted")});
    } else {
        throw ConfigError("unknown key '" + std::string(key) + "'");
    }
}

}  // namespace

std::string serialize(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "# pollushield scenario\n";
    os << "name = " << c.name << '\n';
    os << "n_peers = " << c.n_peers << '\n';
    os << "rounds = " << c.rounds << '\n';
    os << "warmup_rounds = " << c.warmup_rounds << '\n';
    os << "seed = " << c.seed << '\n';
    os << "policy = " << policy_text(c.policy) << '\n';
    os << "request_budget = " << c.request_budget << '\n';
    os << "neighbor_degree = " << c.neighbor_degree << '\n';
    os << "loss_rate_range = " << fmt_double(c.loss_rate_range.first) << ' '
       << fmt_double(c.loss_rate_range.second) << '\n';
    os << "requesters =";
    if (c.all_request) {
        os << " all";
    } else {
        for (PeerId id : c.requesters) os << ' ' << id;
    }
    os << '\n';
    os << "passive =";
    for (PeerId id : c.passive) os << ' ' << id;
    os << '\n';
    os << "params = " << params_tokens(c.params) << '\n';
    for (const auto& o : c.param_overrides)
        os << "override = " << o.peer << ' ' << params_tokens(o.params) << '\n';
    for (const auto& g : c.behavior_mix) os << "behavior = " << behavior_tokens(g) << '\n';
    for (const auto& p : c.observed_pairs) os << "observe = " << p.observer << ' ' << p.subject << '\n';
    for (const auto& l : c.candidate_lists) {
        os << "candidates = " << l.requester;
        for (PeerId id : l.providers) os << ' ' << id;
        os << '\n';
    }
    for (const auto& h : c.history)
        os << "history = " << h.observer << ' ' << h.subject << ' ' << h.clean << ' '
           << h.polluted << '\n';
    return os.str();
}

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig c;
    c.behavior_mix.clear();
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        try {
            apply_line(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    validate(c);
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void set_field(ScenarioConfig& config, const std::string& key, const std::string& value) {
    apply_line(config, trim(key), trim(value));
}

std::string config_digest(const ScenarioConfig& config) {
    const std::string text = serialize(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pollushield
