#ifndef EWAVE_CONFIG_HPP
#define EWAVE_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "ewave/forward.hpp"
#include "ewave/geometry.hpp"
#include "ewave/medium.hpp"
#include "ewave/source.hpp"

namespace ewave {

/**
 * One experiment = one JSON document. Schema (defaults in parentheses):
 *
 * {
 *   "medium":   {"lambda", "mu", "omega",
 *                "rho": {"kind": "constant-one" | "radial-bump",
 *                        "R", "amplitude"}},
 *   "geometry": {"R", "R1", "Rprime",
 *                "sector":  {"apex": [x,y], "theta_m", "theta_M", "h"},
 *                "polygon": [[x,y], ...]},
 *   "source":   {"type": "constant" | "linear" | "holder" | "nonradiating-bump",
 *                "f0": [f1,f2], "grad": [[a,b],[c,d]],
 *                "alpha", "holder_constant",
 *                "bump": {"center": [x,y], "radius", "amplitude": [a1,a2]}},
 *   "solver":   {"grid_M" (128), "lattice_N" (grid_M/2), "box_L" (1.15 R),
 *                "tau_sweep" ([20,40,80,160]), "tol" (1e-10),
 *                "max_iter" (100), "margin" (0.1), "ff_directions" (256),
 *                "cauchy_points" (512), "extract" (false),
 *                "tilt_degrees" (45)},
 *   "expect":   {"classification", "max_amplitude"},
 *   "seed":     (0)
 * }
 *
 * Angles in radians, lengths dimensionless. R < R1 < Rprime is enforced,
 * and sector/polygon supports must sit inside D_R.
 */
struct ExperimentConfig {
    double lambda = 1.0, mu = 1.0, omega = 2.0;
    std::string rho_kind = "constant-one";
    double rho_R = 1.0, rho_amplitude = 0.0;

    double R = 1.0, R1 = 1.3, Rprime = 1.6;
    std::optional<Sector> sector;
    std::optional<ConvexPolygon> polygon;

    std::string source_type = "constant";
    Vec2 f0{1.0, 0.0};
    Mat2 grad{};
    double alpha = 0.5, holder_constant = 0.0;
    Vec2 bump_center{0.0, 0.0};
    double bump_radius = 0.4;
    Vec2 bump_amplitude{1.0, 0.0};

    int grid_M = 128;
    int lattice_N = 0;  // 0: grid_M / 2
    double box_L = 0.0;  // 0: 1.15 R
    std::vector<double> tau_sweep{20.0, 40.0, 80.0, 160.0};
    double tol = 1e-10;
    int max_iter = 100;
    double margin = 0.1;
    int ff_directions = 256;
    int cauchy_points = 512;
    int quad_order = 20;
    int quad_subdivision = 2;
    bool extract = false;
    double tilt_degrees = 45.0;

    std::optional<std::string> expect_classification;
    std::optional<double> expect_max_amplitude;
    unsigned long long seed = 0;

    static ExperimentConfig load(const std::string& path);
    void validate() const;

    ElasticMedium medium() const;
    DensityProfile density() const;
    SourceModel source() const;
    BoxGrid box_grid() const;
    int effective_lattice_N() const { return lattice_N > 0 ? lattice_N : grid_M / 2; }
};

/** Write one CSV row of doubles at full precision. */
void csv_row(std::ofstream& out, const std::vector<double>& vals);

}  // namespace ewave

#endif
