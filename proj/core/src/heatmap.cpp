#include "bmc/heatmap.hpp"

#include "bmc/error.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>

namespace bmc {

namespace {

using Rgb = std::array<double, 3>;

// Dark-to-bright ramp (black, purple, orange, pale yellow).
constexpr std::array<Rgb, 5> kStops{{{0, 0, 4}, {87, 16, 110}, {188, 55, 84}, {249, 142, 9}, {252, 255, 164}}};

Rgb ramp(double t) {
    t = std::clamp(t, 0.0, 1.0) * (kStops.size() - 1);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(t), kStops.size() - 2);
    const double f = t - k;
    Rgb c;
    for (int q = 0; q < 3; ++q) c[q] = kStops[k][q] + f * (kStops[k + 1][q] - kStops[k][q]);
    return c;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    return os;
}

} // namespace

Image render_heatmap(const ChaosField& c, const OccupationField* overlay) {
    Image img;
    if (c.region_cells == 0) {
        img.width = img.height = 1;
        img.rgb = {0, 0, 0};
        img.empty_region = true;
        return img;
    }
    if (overlay && (overlay->nx != c.nx || overlay->ny != c.ny))
        throw DomainError("render_heatmap: overlay does not match the field");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t k = 0; k < c.weights.size(); ++k) {
        if (!c.in_region[k] || !(c.weights[k] > 0.0)) continue;
        const double v = std::log10(c.weights[k]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    img.width = c.nx;
    img.height = c.ny;
    img.log_lo = lo;
    img.log_hi = hi;
    img.rgb.assign(static_cast<std::size_t>(c.nx) * c.ny * 3, 0);
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(j) * c.nx + i;
            const std::size_t px = (static_cast<std::size_t>(c.ny - 1 - j) * c.nx + i) * 3;
            if (!c.in_region[k]) continue;
            const double t = hi > lo && c.weights[k] > 0.0 ? (std::log10(c.weights[k]) - lo) / (hi - lo) : 0.0;
            Rgb col = ramp(t);
            if (overlay && overlay->counts[k] > 0)
                for (auto& q : col) q = 0.5 * (q + 255.0);
            for (int q = 0; q < 3; ++q) img.rgb[px + q] = static_cast<std::uint8_t>(std::lround(col[q]));
        }
    return img;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
    auto os = open_out(path, true);
    os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

void write_chaos_csv(const ChaosField& c, const std::filesystem::path& path) {
    auto os = open_out(path, false);
    os.precision(17);
    os << "gamma,eps,cell_i,cell_j,x,y,weight\n";
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(j) * c.nx + i;
            if (!c.in_region[k]) continue;
            os << c.gamma << ',' << c.eps << ',' << i << ',' << j << ',' << c.origin.x + i * c.mesh << ','
               << c.origin.y + j * c.mesh << ',' << c.weights[k] << '\n';
        }
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::json heatmap_sidecar(const ChaosField& c, const Image& img) {
    return {{"gamma", c.gamma},
            {"eps", c.eps},
            {"mass", c.mass},
            {"region_cells", c.region_cells},
            {"width", img.width},
            {"height", img.height},
            {"empty_region", img.empty_region},
            {"color_scale", {{"kind", "log10"}, {"lo", img.log_lo}, {"hi", img.log_hi}}}};
}

} // namespace bmc
