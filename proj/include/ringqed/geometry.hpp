// geometry.hpp — atom position generators for clouds and arrays.
//
// Coordinates are in units of λ0. The bus/ring waveguide runs along y, z is
// the height above the resonator surface and x is the quantization axis.
#pragma once

#include "ringqed/units.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ringqed {

// Atoms are never placed closer than this to the dielectric surface.
inline constexpr double kMinHeight = 0.05;

// Gaussian atom cloud above the resonator.
struct CloudParams {
    int n_atoms = 60;
    double sigma_x = 100.0 / 852.0;
    double sigma_y = 2000.0 / 852.0;
    double sigma_z = 430.0 / 852.0;
    double z_mean = 400.0 / 852.0;
    bool poisson_n = false;  // if set, n_atoms is the Poisson mean

    void validate() const;
};

enum class ArrayShape { line, ring };

struct ArrayParams {
    int n_sites = 20;
    double spacing = 0.3;
    double z_height = 330.0 / 852.0;
    double filling = 1.0;
    double delta_z = 0.0;
    ArrayShape shape = ArrayShape::line;
    // When set (and filling < 1), sites are grown one at a time until this
    // many atoms are placed; n_sites is then ignored.
    std::optional<int> target_atoms;

    void validate() const;
};

// One Monte Carlo realization of atom positions.
struct AtomConfig {
    std::vector<Vec3> positions;
    // Coordinate along the direction of WGM propagation (y for lines and
    // clouds, arc length for rings); the cavity phase is k_wg times this.
    std::vector<double> path;
    // Perimeter of the closed path for ring geometries.
    std::optional<double> loop_length;
    std::string geometry_tag;
    // Number of lattice sites consumed while growing a partially filled
    // array (equals size() for clouds).
    int sites_used = 0;

    std::size_t size() const { return positions.size(); }
    void validate() const;
};

AtomConfig sample_cloud(const CloudParams& params, std::uint64_t seed);

AtomConfig build_array(const ArrayParams& params, std::uint64_t seed);

// Single atom at `position`, path coordinate y.
AtomConfig single_atom(const Vec3& position);

// Atoms at explicit positions; path coordinate taken from y.
AtomConfig from_positions(std::vector<Vec3> positions, std::string tag = "explicit");

void to_json(nlohmann::json& j, const AtomConfig& config);
void from_json(const nlohmann::json& j, AtomConfig& config);

std::string to_string(ArrayShape shape);
ArrayShape array_shape_from_string(const std::string& name);

}  // namespace ringqed
