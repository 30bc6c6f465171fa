#pragma once

#include "bmc/geometry.hpp"
#include "bmc/lattice.hpp"
#include "bmc/rng.hpp"

#include <nlohmann/json.hpp>

namespace bmc {

void to_json(nlohmann::json& j, const Point2& p);
void from_json(const nlohmann::json& j, Point2& p);
void to_json(nlohmann::json& j, const DomainSpec& d);
void from_json(const nlohmann::json& j, DomainSpec& d);
void to_json(nlohmann::json& j, const LatticeConfig& c);
void from_json(const nlohmann::json& j, LatticeConfig& c);
void to_json(nlohmann::json& j, const RunSeed& s);
void from_json(const nlohmann::json& j, RunSeed& s);
void to_json(nlohmann::json& j, const GridIndex& g);
void from_json(const nlohmann::json& j, GridIndex& g);

nlohmann::json region_to_json(const Region& r);
Region region_from_json(const nlohmann::json& j);

} // namespace bmc
