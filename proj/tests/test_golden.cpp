// Byte-exact regression against checked-in CSV output. Set
// POLLUSHIELD_UPDATE_GOLDEN=1 to rewrite the files after an intended change.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pollushield/report_io.hpp"

using namespace pollushield;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool updating() {
    const char* v = std::getenv("POLLUSHIELD_UPDATE_GOLDEN");
    return v != nullptr && std::string(v) == "1";
}

void check_golden(const std::string& name, const std::string& actual) {
    const fs::path path = fs::path(POLLUSHIELD_GOLDEN_DIR) / name;
    if (updating()) {
        fs::create_directories(path.parent_path());
        std::ofstream(path, std::ios::binary) << actual;
        MESSAGE("rewrote " << path.string());
        return;
    }
    REQUIRE_MESSAGE(fs::exists(path), "missing golden file " << path.string());
    CHECK_MESSAGE(slurp(path) == actual, "golden mismatch: " << path.string());
}

void check_experiment(ExperimentId id) {
    for (const auto& lc : experiment_plan(id)) {
        const MetricsReport r = run_scenario(lc.config);
        check_golden(lc.label + "_trajectories.csv", trajectories_csv(r));
        check_golden(lc.label + "_summary.csv", summary_csv(r));
        check_golden(lc.label + "_meta.csv", meta_csv(r));
    }
}

}  // namespace

TEST_CASE("golden output: e1") { check_experiment(ExperimentId::E1); }
TEST_CASE("golden output: e2") { check_experiment(ExperimentId::E2); }
TEST_CASE("golden output: e4") { check_experiment(ExperimentId::E4); }
TEST_CASE("golden output: e5") { check_experiment(ExperimentId::E5); }
