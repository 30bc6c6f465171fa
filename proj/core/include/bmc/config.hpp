#pragma once

#include "bmc/geometry.hpp"
#include "bmc/lattice.hpp"
#include "bmc/suite.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bmc {

// One experiment description shared by every CLI command. The defaults
// reproduce the four-panel heatmap figure and the full acceptance suite.
struct RunConfig {
    DomainSpec domain = DomainSpec::rectangle({0.0, 0.0}, 1.0, 1.0, {0.5, 0.5});
    LatticeConfig lattice{};
    std::vector<double> gammas{0.3, 0.8, 1.3, 1.8};
    std::vector<double> eps{0.018315638888734179};
    Region region = WholeDomain{};
    std::size_t replicas = 1;
    std::uint64_t seed = 20240617;
    std::string out = "out";
    unsigned workers = 0;  // 0 = available cores
    std::string suite = "all";
    SuiteConfig verify{};

    // Throws DomainError / SubResolution before any work starts.
    void validate() const;
    // The suite config with the run-level seed, workers, out and suite applied.
    SuiteConfig suite_config() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_run_config(const std::filesystem::path& path);

// Sets a dotted path ("lattice.mesh", "verify.ac1.replicas") in j, creating
// objects on the way. Throws DomainError when a non-object sits on the path.
void set_json_path(nlohmann::json& j, const std::string& dotted, const nlohmann::json& value);

} // namespace bmc
