#include "ewave/config.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace ewave {

using nlohmann::json;

namespace {

Vec2 vec2_of(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    json j;
    in >> j;

    ExperimentConfig c;
    if (j.contains("medium")) {
        const auto& m = j["medium"];
        c.lambda = m.value("lambda", c.lambda);
        c.mu = m.value("mu", c.mu);
        c.omega = m.value("omega", c.omega);
        if (m.contains("rho")) {
            const auto& r = m["rho"];
            c.rho_kind = r.value("kind", c.rho_kind);
            c.rho_R = r.value("R", c.rho_R);
            c.rho_amplitude = r.value("amplitude", c.rho_amplitude);
        }
    }
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        c.R = g.value("R", c.R);
        c.R1 = g.value("R1", c.R1);
        c.Rprime = g.value("Rprime", c.Rprime);
        if (g.contains("sector")) {
            const auto& s = g["sector"];
            c.sector = Sector(vec2_of(s.at("apex")), s.at("theta_m").get<double>(),
                              s.at("theta_M").get<double>(), s.at("h").get<double>());
        }
        if (g.contains("polygon")) {
            std::vector<Vec2> vs;
            for (const auto& v : g["polygon"]) vs.push_back(vec2_of(v));
            c.polygon = ConvexPolygon(vs);
        }
    }
    if (j.contains("source")) {
        const auto& s = j["source"];
        c.source_type = s.value("type", c.source_type);
        if (s.contains("f0")) c.f0 = vec2_of(s["f0"]);
        if (s.contains("grad")) {
            const auto& g = s["grad"];
            c.grad = Mat2{g.at(0).at(0).get<double>(), g.at(0).at(1).get<double>(),
                          g.at(1).at(0).get<double>(), g.at(1).at(1).get<double>()};
        }
        c.alpha = s.value("alpha", c.alpha);
        c.holder_constant = s.value("holder_constant", c.holder_constant);
        if (s.contains("bump")) {
            const auto& b = s["bump"];
            if (b.contains("center")) c.bump_center = vec2_of(b["center"]);
            c.bump_radius = b.value("radius", c.bump_radius);
            if (b.contains("amplitude")) c.bump_amplitude = vec2_of(b["amplitude"]);
        }
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        c.grid_M = s.value("grid_M", c.grid_M);
        c.lattice_N = s.value("lattice_N", c.lattice_N);
        c.box_L = s.value("box_L", c.box_L);
        if (s.contains("tau_sweep")) c.tau_sweep = s["tau_sweep"].get<std::vector<double>>();
        c.tol = s.value("tol", c.tol);
        c.max_iter = s.value("max_iter", c.max_iter);
        c.margin = s.value("margin", c.margin);
        c.ff_directions = s.value("ff_directions", c.ff_directions);
        c.cauchy_points = s.value("cauchy_points", c.cauchy_points);
        c.quad_order = s.value("quad_order", c.quad_order);
        c.quad_subdivision = s.value("quad_subdivision", c.quad_subdivision);
        c.extract = s.value("extract", c.extract);
        c.tilt_degrees = s.value("tilt_degrees", c.tilt_degrees);
    }
    if (j.contains("expect")) {
        const auto& e = j["expect"];
        if (e.contains("classification"))
            c.expect_classification = e["classification"].get<std::string>();
        if (e.contains("max_amplitude")) c.expect_max_amplitude = e["max_amplitude"].get<double>();
    }
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    if (!(R > 0.0 && R < R1 && R1 < Rprime))
        throw std::invalid_argument("config: needs 0 < R < R1 < Rprime");
    if (!(tol > 0.0) || max_iter < 1)
        throw std::invalid_argument("config: tolerances must be positive");
    if (grid_M < 8 || grid_M % 2 != 0)
        throw std::invalid_argument("config: grid_M must be even and at least 8");
    if (rho_kind != "constant-one" && rho_kind != "radial-bump")
        throw std::invalid_argument("config: unknown density kind " + rho_kind);
    if (rho_kind == "radial-bump" && !(rho_R <= R))
        throw std::invalid_argument("config: density support must sit inside D_R");
    for (double t : tau_sweep)
        if (!(t > 0.0)) throw std::invalid_argument("config: tau values must be positive");
    if (sector && !(sector->apex.norm() + sector->h <= R))
        throw std::invalid_argument("config: sector must sit inside D_R");
    if (polygon && !(polygon->max_radius() <= R))
        throw std::invalid_argument("config: polygon must sit inside D_R");
    if (source_type != "constant" && source_type != "linear" && source_type != "holder" &&
        source_type != "nonradiating-bump")
        throw std::invalid_argument("config: unknown source type " + source_type);
}

DensityProfile ExperimentConfig::density() const {
    if (rho_kind == "radial-bump") return DensityProfile::radial_bump(rho_R, rho_amplitude);
    return DensityProfile::constant_one();
}

ElasticMedium ExperimentConfig::medium() const { return {lambda, mu, omega, density()}; }

SourceModel ExperimentConfig::source() const {
    const Mat2 G = source_type == "constant" ? Mat2{} : grad;
    if (source_type == "nonradiating-bump") {
        SmoothBump g{bump_center, bump_radius, bump_amplitude};
        return make_nonradiating(g, medium(), R);
    }
    if (sector) {
        if (source_type == "holder")
            return SourceModel::holder_on_sector(*sector, f0, G, alpha, holder_constant,
                                                 Vec2{1.0, 0.0});
        return SourceModel::polynomial_on_sector(*sector, f0, G);
    }
    if (polygon) {
        const Vec2 x0 = polygon->vertices.front();
        return SourceModel::polynomial_on_polygon(*polygon, x0, f0, G);
    }
    throw std::invalid_argument("config: source needs a sector or polygon support");
}

BoxGrid ExperimentConfig::box_grid() const {
    const double L = box_L > 0.0 ? box_L : 1.15 * R;
    return {grid_M, L};
}

void csv_row(std::ofstream& out, const std::vector<double>& vals) {
    char buf[64];
    for (std::size_t i = 0; i < vals.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", vals[i]);
        out << buf << (i + 1 < vals.size() ? "," : "\n");
    }
}

}  // namespace ewave
