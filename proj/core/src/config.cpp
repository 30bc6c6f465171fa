#include "bmc/config.hpp"

#include "bmc/error.hpp"
#include "bmc/json_io.hpp"

#include <fstream>

namespace bmc {

void RunConfig::validate() const {
    domain.validate();
    lattice.validate();
    if (!domain.contains(domain.start)) throw DomainError("start point outside the domain");
    if (gammas.empty()) throw DomainError("gamma list is empty");
    for (double g : gammas)
        if (!(g > 0.0 && g < 2.0)) throw DomainError("gamma must lie in (0, 2)");
    if (eps.empty()) throw DomainError("eps ladder is empty");
    for (double e : eps) {
        if (!(e > 0.0 && e < 1.0)) throw DomainError("eps must lie in (0, 1)");
        if (e < 2.0 * lattice.mesh) throw SubResolution("eps below two lattice spacings");
    }
    if (replicas == 0) throw DomainError("replicas must be positive");
    suite_criteria(suite);
}

SuiteConfig RunConfig::suite_config() const {
    SuiteConfig s = verify;
    s.seed = seed;
    s.workers = workers;
    s.out = out.empty() ? "" : out + "/verify";
    s.suite = suite;
    return s;
}

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"domain", c.domain},   {"lattice", c.lattice},   {"gammas", c.gammas},
                       {"eps", c.eps},         {"region", region_to_json(c.region)},
                       {"replicas", c.replicas}, {"seed", c.seed},       {"out", c.out},
                       {"workers", c.workers}, {"suite", c.suite},       {"verify", c.verify}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
    auto get = [&](const char* k, auto& v) {
        if (j.contains(k)) j.at(k).get_to(v);
    };
    get("domain", c.domain);
    get("lattice", c.lattice);
    get("gammas", c.gammas);
    get("eps", c.eps);
    if (j.contains("region")) c.region = region_from_json(j.at("region"));
    get("replicas", c.replicas);
    get("seed", c.seed);
    get("out", c.out);
    get("workers", c.workers);
    get("suite", c.suite);
    get("verify", c.verify);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("bad config " + path.string() + ": " + e.what());
    }
    return j.get<RunConfig>();
}

void set_json_path(nlohmann::json& j, const std::string& dotted, const nlohmann::json& value) {
    nlohmann::json* node = &j;
    std::size_t pos = 0;
    while (true) {
        const auto dot = dotted.find('.', pos);
        const std::string key = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (key.empty()) throw DomainError("bad config path " + dotted);
        if (node->is_null()) *node = nlohmann::json::object();
        if (!node->is_object()) throw DomainError("config path " + dotted + " crosses a non-object");
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    *node = value;
}

} // namespace bmc
