#include "pollushield/report_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pollushield {

std::string format_value(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
    std::string s(buf, end);
    if (s == "-0.000000") s.erase(0, 1);
    return s;
}

std::string trajectories_csv(const MetricsReport& report) {
    std::ostringstream os;
    os << "round,observer,subject,direct,indirect,alpha,trust\n";
    for (const auto& t : report.trajectories)
        for (const auto& p : t.points) {
            os << p.round << ',' << t.pair.observer << ',' << t.pair.subject << ','
               << format_value(p.direct) << ',';
            if (p.indirect) os << format_value(*p.indirect);
            os << ',' << format_value(p.alpha) << ',' << format_value(p.trust) << '\n';
        }
    return os.str();
}

std::string summary_csv(const MetricsReport& report) {
    std::ostringstream os;
    os << "peer,behavior,goodput,polluted_accepted,detection_round,requests_received\n";
    for (const auto& s : report.summary) {
        os << s.peer << ',' << s.behavior << ',' << format_value(s.goodput) << ','
           << s.polluted_accepted << ',';
        if (s.detection_round) os << *s.detection_round;
        os << ',' << s.requests_received << '\n';
    }
    return os.str();
}

std::string meta_csv(const MetricsReport& report) {
    std::ostringstream os;
    os << "key,value\n"
       << "label," << report.meta.label << '\n'
       << "seed," << report.meta.seed << '\n'
       << "config_digest," << report.meta.config_digest << '\n'
       << "engine_version," << report.meta.engine_version << '\n'
       << "deliveries," << report.deliveries << '\n';
    return os.str();
}

std::vector<std::filesystem::path> emit_csv(const MetricsReport& report,
                                            const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError(dir.string() + ": cannot create output directory: " + ec.message());

    const std::string& label = report.meta.label;
    const std::vector<std::pair<std::filesystem::path, std::string>> files = {
        {dir / (label + "_trajectories.csv"), trajectories_csv(report)},
        {dir / (label + "_summary.csv"), summary_csv(report)},
        {dir / (label + "_meta.csv"), meta_csv(report)},
    };
    std::vector<std::filesystem::path> written;
    for (const auto& [path, body] : files) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw OutputError(path.string() + ": cannot open for writing");
        out << body;
        out.flush();
        if (!out) throw OutputError(path.string() + ": write failed");
        written.push_back(path);
    }
    return written;
}

}  // namespace pollushield
