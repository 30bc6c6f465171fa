// bmchaos: simulate killed walks, render chaos heatmaps, run the acceptance
// suite and tabulate Bessel-process quantities.
#include "bmc/bessel.hpp"
#include "bmc/chaos.hpp"
#include "bmc/config.hpp"
#include "bmc/heatmap.hpp"
#include "bmc/local_time_field.hpp"
#include "bmc/occf.hpp"
#include "bmc/suite.hpp"
#include "bmc/walk.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicas;
    std::optional<std::string> out;
    std::optional<unsigned> workers;
    std::optional<std::string> suite;
    std::optional<double> mesh;
    std::vector<double> gammas;
    std::vector<double> eps;
    std::vector<std::string> sets;  // path=json
    bool dump = false;
};

bmc::RunConfig resolve(const Overrides& o) {
    json j = o.config.empty() ? json(bmc::RunConfig{}) : json(bmc::load_run_config(o.config));
    if (o.seed) j["seed"] = *o.seed;
    if (o.replicas) j["replicas"] = *o.replicas;
    if (o.out) j["out"] = *o.out;
    if (o.workers) j["workers"] = *o.workers;
    if (o.suite) j["suite"] = *o.suite;
    if (o.mesh) bmc::set_json_path(j, "lattice.mesh", *o.mesh);
    if (!o.gammas.empty()) j["gammas"] = o.gammas;
    if (!o.eps.empty()) j["eps"] = o.eps;
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw bmc::DomainError("--set expects path=value, got " + s);
        json v;
        try {
            v = json::parse(s.substr(eq + 1));
        } catch (const json::exception&) {
            v = s.substr(eq + 1);
        }
        bmc::set_json_path(j, s.substr(0, eq), v);
    }
    auto cfg = j.get<bmc::RunConfig>();
    cfg.validate();
    return cfg;
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream os(p);
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("write failed: " + p.string());
}

int cmd_simulate(const bmc::RunConfig& cfg) {
    const fs::path dir = fs::path(cfg.out) / "simulate";
    fs::create_directories(dir);
    const bmc::Lattice lat(cfg.domain, cfg.lattice);
    auto r = bmc::map_replicas(lat, {cfg.replicas, cfg.seed, cfg.workers},
                               [&](const bmc::OccupationField& f, std::size_t k, unsigned) {
                                   char name[32];
                                   std::snprintf(name, sizeof name, "walk_%06zu", k);
                                   bmc::write_occf(dir / (std::string(name) + ".occf"), f);
                                   write_json(dir / (std::string(name) + ".json"), bmc::occf_sidecar(f, cfg.lattice));
                                   return f.step_count;
                               });
    double mean = 0.0;
    for (auto s : r.values) mean += static_cast<double>(s);
    mean /= static_cast<double>(r.values.size());
    json summary{{"config", cfg}, {"replicas", cfg.replicas}, {"mean_steps", mean}, {"truncated", r.truncated}};
    write_json(dir / "summary.json", summary);
    std::cout << "wrote " << cfg.replicas << " occupation fields to " << dir.string() << ", mean steps " << mean
              << ", truncated " << r.truncated << '\n';
    return r.truncated == 0 ? 0 : 3;
}

int cmd_figure(const bmc::RunConfig& cfg) {
    const fs::path dir = fs::path(cfg.out) / "figure";
    fs::create_directories(dir);
    const auto field = bmc::run_killed_walk(cfg.domain, cfg.lattice, {cfg.seed, 0});
    const double eps = cfg.eps.front();
    const auto lt = bmc::compute_local_time_field(field, eps, cfg.lattice);
    const auto region = bmc::region_mask(field, cfg.region, cfg.lattice);
    for (double g : cfg.gammas) {
        const auto cf = bmc::build_mu(lt, region, g);
        const auto img = bmc::render_heatmap(cf, &field);
        const std::string stem = "gamma_" + num(g);
        bmc::write_ppm(img, dir / (stem + ".ppm"));
        bmc::write_chaos_csv(cf, dir / (stem + ".csv"));
        write_json(dir / (stem + ".json"), bmc::heatmap_sidecar(cf, img));
        std::cout << stem << ": mass " << cf.mass << ", top-1% share " << bmc::top_mass_fraction(cf, 0.01) << '\n';
    }
    std::cout << "walk of " << field.step_count << " steps, eps " << eps << ", outputs in " << dir.string() << '\n';
    return 0;
}

int cmd_verify(const bmc::RunConfig& cfg) {
    const auto sc = cfg.suite_config();
    const auto rep = bmc::run_acceptance_suite(
        sc, [](const bmc::CriterionResult& c, const std::vector<bmc::CheckReport>& checks) {
            std::cout << bmc::criterion_line(c, checks) << std::endl;
        });
    if (!sc.out.empty()) {
        fs::create_directories(sc.out);
        write_json(fs::path(sc.out) / ("report_" + sc.suite + ".json"), bmc::suite_json(rep, true));
        std::ofstream(fs::path(sc.out) / ("report_" + sc.suite + ".md")) << bmc::suite_markdown(rep);
    }
    std::cout << (rep.passed() ? "suite passed" : "suite FAILED") << " (" << rep.criteria.size() << " criteria)\n";
    return rep.passed() ? 0 : 1;
}

struct BesselArgs {
    double r = 1.0, s = 1.0, x0 = 1.0, gamma = 1.0, b = 0.0, M = 2.0, lambda = 3.0;
    double y_max = 0.0;
    int points = 200;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::vector<double> t{10, 20, 40};
};

void bessel_density(const BesselArgs& a) {
    const double top = a.y_max > 0 ? a.y_max : a.r + 6.0 * std::sqrt(a.s);
    std::cout << "y,density\n";
    for (int k = 1; k <= a.points; ++k) {
        const double y = top * k / a.points;
        std::cout << y << ',' << bmc::transition_density(a.r, a.s, y) << '\n';
    }
}

void bessel_sample(const BesselArgs& a) {
    std::cout << "index,x\n";
    for (std::size_t k = 0; k < a.n; ++k) std::cout << k << ',' << bmc::sample_besq0(a.x0, a.s, {a.seed, k}) << '\n';
}

void bessel_l1(const BesselArgs& a) {
    const auto v = bmc::l1_limit_check(a.r, a.gamma, a.b, a.t);
    std::cout << "t,ratio\n";
    for (std::size_t k = 0; k < v.size(); ++k) std::cout << a.t[k] << ',' << v[k] << '\n';
}

void bessel_l2(const BesselArgs& a) {
    const auto v = bmc::l2_limit_check(a.r, a.gamma, a.M, a.t);
    std::cout << "t,ratio\n";
    for (std::size_t k = 0; k < v.size(); ++k) std::cout << a.t[k] << ',' << v[k] << '\n';
}

void bessel_tail(const BesselArgs& a) {
    std::cout << "t,lambda,tail,log_tail\n";
    for (double t : a.t) {
        const auto p = bmc::tail_prob(a.r, t, a.lambda);
        std::cout << t << ',' << a.lambda << ',' << p.value << ',' << p.log_value << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brownian multiplicative chaos from killed planar random walks"};
    app.require_subcommand(1);
    app.fallthrough();
    Overrides o;
    app.add_option("--config", o.config, "JSON run config")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--replicas", o.replicas, "number of walks");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--workers", o.workers, "worker threads (0 = all cores)");
    app.add_option("--suite", o.suite, "acceptance suite: all, walk, bessel, chaos, figure, determinism, none or AC-k");
    app.add_option("--mesh", o.mesh, "lattice spacing h");
    app.add_option("--gamma", o.gammas, "gamma values")->delimiter(',');
    app.add_option("--eps", o.eps, "eps ladder")->delimiter(',');
    app.add_option("--set", o.sets, "override a config path, e.g. verify.ac1.replicas=2000");
    app.add_flag("--dump-config", o.dump, "print the resolved config and exit");

    auto* sim = app.add_subcommand("simulate", "write occupation fields of killed walks");
    auto* fig = app.add_subcommand("figure", "render one heatmap per gamma from a single walk");
    auto* ver = app.add_subcommand("verify", "run the acceptance suite");

    BesselArgs ba;
    auto* bes = app.add_subcommand("bessel", "tabulate zero-dimensional Bessel quantities as CSV");
    bes->require_subcommand(1);
    auto* b_den = bes->add_subcommand("density", "q_s(r, y) on a y grid");
    b_den->add_option("--r", ba.r);
    b_den->add_option("--s", ba.s);
    b_den->add_option("--y-max", ba.y_max);
    b_den->add_option("--points", ba.points);
    auto* b_smp = bes->add_subcommand("sample", "exact BESQ0 draws");
    b_smp->add_option("--x0", ba.x0);
    b_smp->add_option("--s", ba.s);
    b_smp->add_option("--n", ba.n);
    b_smp->add_option("--seed", ba.seed);
    auto* b_l1 = bes->add_subcommand("l1", "exponential-tilt tail ratio over a t ladder");
    b_l1->add_option("--r", ba.r);
    b_l1->add_option("--gamma", ba.gamma);
    b_l1->add_option("--b", ba.b);
    b_l1->add_option("--t", ba.t)->delimiter(',');
    auto* b_l2 = bes->add_subcommand("l2", "windowed exponential moment ratio over a t ladder");
    b_l2->add_option("--r", ba.r);
    b_l2->add_option("--gamma", ba.gamma);
    b_l2->add_option("--M", ba.M);
    b_l2->add_option("--t", ba.t)->delimiter(',');
    auto* b_tail = bes->add_subcommand("tail", "P_r[R_t >= lambda]");
    b_tail->add_option("--r", ba.r);
    b_tail->add_option("--lambda", ba.lambda);
    b_tail->add_option("--t", ba.t)->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (bes->parsed()) {
            std::cout.precision(12);
            if (b_den->parsed()) bessel_density(ba);
            if (b_smp->parsed()) bessel_sample(ba);
            if (b_l1->parsed()) bessel_l1(ba);
            if (b_l2->parsed()) bessel_l2(ba);
            if (b_tail->parsed()) bessel_tail(ba);
            return 0;
        }
        const auto cfg = resolve(o);
        if (o.dump) {
            std::cout << json(cfg).dump(2) << '\n';
            return 0;
        }
        if (sim->parsed()) return cmd_simulate(cfg);
        if (fig->parsed()) return cmd_figure(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
    } catch (const std::exception& e) {
        std::cerr << "bmchaos: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
