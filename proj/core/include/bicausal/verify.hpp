#pragma once

// Suite runner over the identity registry and the catalog, plus surface reports and mesh export.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bicausal/catalog.hpp"
#include "bicausal/relations.hpp"

namespace bicausal {

struct SuiteConfig {
    std::vector<std::pair<double, double>> params;  // (kappa, tau); empty = default_params()
    std::vector<IdentityId> identities;             // empty = all
    std::vector<std::string> surfaces;              // empty = default_surface_names()
    int samples_per_surface = 16;
    int ambient_samples = 64;
    std::uint64_t seed = 1;
    std::map<std::string, double> tolerance_overrides;  // identity or property name -> tolerance
    std::optional<double> fd_step;
    int threads = 0;  // 0 = hardware concurrency

    static const std::vector<std::pair<double, double>>& default_params();
    // Throws CONFIG_INVALID.
    void validate() const;
};

struct IdentityReport {
    IdentityId id{};
    Tier tier{};
    double tolerance = 0;
    std::size_t samples = 0;
    double max_abs_residual = 0;
    double mean_abs_residual = 0;
    std::string worst;  // location of the largest residual
    std::map<std::string, std::size_t> excluded;  // reason -> count
    bool pass = true;
    bool evaluated() const { return samples > 0; }
};

struct PropertyReport {
    std::string surface;
    double kappa = 0, tau = 0;
    std::string property;
    std::size_t samples = 0;
    double max_residual = 0;
    double tolerance = 0;
    std::map<std::string, std::size_t> excluded;
    bool pass = true;
};

struct SurfaceRun {
    std::string surface;
    double kappa = 0, tau = 0;
    std::string model;
    std::size_t samples = 0, excluded = 0;
    std::string skipped;  // reason when the surface does not apply to the parameters
};

struct ExcludedPoint {
    std::string surface;
    double kappa = 0, tau = 0, u = 0, v = 0;
    std::string reason;
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<IdentityReport> identities;
    std::vector<SurfaceRun> surfaces;
    std::vector<PropertyReport> properties;
    std::vector<ExcludedPoint> excluded;
    bool pass = true;
    double wall_seconds = 0;
    std::vector<std::pair<std::string, double>> timing;  // per parameter set

    std::string to_json(bool with_timing = true) const;
};

// Deterministic given the config (the timing block aside). Throws CONFIG_INVALID.
SuiteReport run_suite(const SuiteConfig& config);

// Tolerance of a property check by name ("RULED", "H_R=0", ...).
double property_tolerance(const std::string& name);
const std::vector<std::string>& property_names();

// Stratified (Latin hypercube) samples in the rectangle inset by `inset` (fraction of each side).
std::vector<Vec2> stratified_samples(const ParamRect& r, int n, std::uint64_t seed, double inset = 0.05);

// One CSV row per grid point of the 5%-inset domain; failing points are flagged, not dropped.
std::string surface_report_csv(const std::string& surface, const SpaceParams& prm, int nu, int nv,
                               const EngineOptions& opt = {});

enum class MeshFormat { OBJ, CSV };
// Throws UNSUPPORTED_FORMAT for OBJ on group models.
std::string mesh_export(const std::string& surface, const SpaceParams& prm, int nu, int nv, MeshFormat fmt);

}  // namespace bicausal
