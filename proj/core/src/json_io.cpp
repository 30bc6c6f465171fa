#include "bmc/json_io.hpp"

#include "bmc/error.hpp"

namespace bmc {

using nlohmann::json;

void to_json(json& j, const Point2& p) { j = json::array({p.x, p.y}); }

void from_json(const json& j, Point2& p) {
    if (!j.is_array() || j.size() != 2) throw DomainError("point must be a two-element array");
    p = {j[0].get<double>(), j[1].get<double>()};
}

void to_json(json& j, const DomainSpec& d) {
    if (const auto* c = std::get_if<Disc>(&d.kind))
        j = {{"kind", "disc"}, {"center", c->center}, {"radius", c->radius}, {"start", d.start}};
    else {
        const auto& r = std::get<Rectangle>(d.kind);
        j = {{"kind", "rectangle"}, {"lower_left", r.lower_left}, {"width", r.width},
             {"height", r.height}, {"start", d.start}};
    }
}

void from_json(const json& j, DomainSpec& d) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "disc")
        d = DomainSpec{Disc{j.at("center").get<Point2>(), j.at("radius").get<double>()}, j.at("start").get<Point2>()};
    else if (kind == "rectangle")
        d = DomainSpec{Rectangle{j.at("lower_left").get<Point2>(), j.at("width").get<double>(),
                                 j.at("height").get<double>()},
                       j.at("start").get<Point2>()};
    else
        throw DomainError("unknown domain kind '" + kind + "'");
}

void to_json(json& j, const LatticeConfig& c) {
    j = {{"mesh", c.mesh}, {"max_steps", c.max_steps}, {"window", c.window}};
}

void from_json(const json& j, LatticeConfig& c) {
    c = LatticeConfig{};
    c.mesh = j.at("mesh").get<double>();
    if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<std::uint64_t>();
    if (j.contains("window")) c.window = j.at("window").get<double>();
}

void to_json(json& j, const RunSeed& s) {
    j = {{"master_seed", s.master_seed}, {"replica_index", s.replica_index}};
}

void from_json(const json& j, RunSeed& s) {
    s.master_seed = j.at("master_seed").get<std::uint64_t>();
    s.replica_index = j.at("replica_index").get<std::uint64_t>();
}

void to_json(json& j, const GridIndex& g) { j = json::array({g.i, g.j}); }

void from_json(const json& j, GridIndex& g) { g = {j.at(0).get<int>(), j.at(1).get<int>()}; }

json region_to_json(const Region& r) {
    if (std::holds_alternative<WholeDomain>(r)) return {{"kind", "domain"}};
    if (const auto* a = std::get_if<Annulus>(&r))
        return {{"kind", "annulus"}, {"center", a->center}, {"inner", a->inner}, {"outer", a->outer}};
    const auto& b = std::get<Box>(r);
    return {{"kind", "box"}, {"lower_left", b.lower_left}, {"width", b.width}, {"height", b.height}};
}

Region region_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "domain") return WholeDomain{};
    if (kind == "annulus")
        return Annulus{j.at("center").get<Point2>(), j.at("inner").get<double>(), j.at("outer").get<double>()};
    if (kind == "box")
        return Box{j.at("lower_left").get<Point2>(), j.at("width").get<double>(), j.at("height").get<double>()};
    throw DomainError("unknown region kind '" + kind + "'");
}

} // namespace bmc
