#include "ringqed/geometry.hpp"

#include "ringqed/errors.hpp"
#include "ringqed/random.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace ringqed {

namespace {

constexpr long kMaxSites = 1'000'000;

// Gaussian height truncated to z > kMinHeight by resampling.
double sample_height(Rng& rng, double mean, double sigma) {
    if (sigma == 0.0) return std::max(mean, kMinHeight);
    std::normal_distribution<double> dist(mean, sigma);
    for (int attempt = 0; attempt < 1'000'000; ++attempt) {
        const double z = dist(rng);
        if (z > kMinHeight) return z;
    }
    throw GenerationFailure("height distribution has negligible mass above the surface");
}

}  // namespace

void CloudParams::validate() const {
    if (n_atoms < 1) throw InvalidArgument("cloud: n_atoms must be at least 1");
    if (sigma_x < 0 || sigma_y < 0 || sigma_z < 0) {
        throw InvalidArgument("cloud: r.m.s. widths must be non-negative");
    }
    if (!(z_mean > 0)) throw InvalidArgument("cloud: z_mean must be positive");
}

void ArrayParams::validate() const {
    if (!(spacing > 0)) throw InvalidArgument("spacing must be positive");
    if (!(filling > 0 && filling <= 1)) throw InvalidArgument("filling must lie in (0, 1]");
    if (delta_z < 0) throw InvalidArgument("delta_z must be non-negative");
    if (!(z_height > 0)) throw InvalidArgument("z_height must be positive");
    if (target_atoms) {
        if (*target_atoms < 1) throw InvalidArgument("target_atoms must be at least 1");
    } else if (n_sites < 1) {
        throw InvalidArgument("n_sites must be at least 1");
    }
}

void AtomConfig::validate() const {
    if (path.size() != positions.size()) {
        throw DimensionMismatch("atom config: path and positions differ in length");
    }
    for (const auto& r : positions) {
        if (!r.allFinite()) throw InvalidArgument("atom config: non-finite position");
        if (!(r.z() > 0)) throw InvalidArgument("atom config: atom below the surface");
    }
}

AtomConfig sample_cloud(const CloudParams& params, std::uint64_t seed) {
    params.validate();
    Rng rng(seed);

    int n = params.n_atoms;
    if (params.poisson_n) {
        std::poisson_distribution<int> count(static_cast<double>(params.n_atoms));
        do {
            n = count(rng);
        } while (n < 1);
    }

    std::normal_distribution<double> unit(0.0, 1.0);
    AtomConfig config;
    config.geometry_tag = "cloud";
    config.positions.reserve(n);
    config.path.reserve(n);
    for (int j = 0; j < n; ++j) {
        const double x = params.sigma_x * unit(rng);
        const double y = params.sigma_y * unit(rng);
        const double z = sample_height(rng, params.z_mean, params.sigma_z);
        config.positions.emplace_back(x, y, z);
        config.path.push_back(y);
    }
    config.sites_used = n;
    return config;
}

AtomConfig build_array(const ArrayParams& params, std::uint64_t seed) {
    params.validate();
    Rng rng(seed);
    std::bernoulli_distribution occupied(params.filling);

    // Decide which lattice sites hold atoms.
    std::vector<long> sites;
    long n_sites = params.n_sites;
    if (params.filling >= 1.0) {
        const long n = params.target_atoms ? *params.target_atoms : params.n_sites;
        for (long m = 0; m < n; ++m) sites.push_back(m);
        n_sites = n;
    } else if (params.target_atoms) {
        long m = 0;
        while (static_cast<long>(sites.size()) < *params.target_atoms) {
            if (m >= kMaxSites) {
                throw GenerationFailure("array: target_atoms not reached within the site budget");
            }
            if (occupied(rng)) sites.push_back(m);
            ++m;
        }
        n_sites = m;
    } else {
        for (int attempt = 0; sites.empty(); ++attempt) {
            if (attempt > 10'000) throw GenerationFailure("array: no occupied sites");
            for (long m = 0; m < params.n_sites; ++m) {
                if (occupied(rng)) sites.push_back(m);
            }
        }
    }

    AtomConfig config;
    config.sites_used = static_cast<int>(n_sites);
    config.positions.reserve(sites.size());
    config.path.reserve(sites.size());

    const double loop = static_cast<double>(n_sites) * params.spacing;
    const double radius = loop / (2.0 * std::numbers::pi);
    for (const long m : sites) {
        const double s = static_cast<double>(m) * params.spacing;
        const double z = params.delta_z > 0 ? sample_height(rng, params.z_height, params.delta_z)
                                            : params.z_height;
        if (params.shape == ArrayShape::line) {
            config.positions.emplace_back(0.0, s, z);
        } else {
            const double angle = s / radius;
            config.positions.emplace_back(radius * std::cos(angle), radius * std::sin(angle), z);
        }
        config.path.push_back(s);
    }
    if (params.shape == ArrayShape::ring) {
        config.loop_length = loop;
        config.geometry_tag = "ring-array";
    } else {
        config.geometry_tag = "line-array";
    }
    return config;
}

AtomConfig single_atom(const Vec3& position) {
    return from_positions({position}, "single-atom");
}

AtomConfig from_positions(std::vector<Vec3> positions, std::string tag) {
    AtomConfig config;
    config.path.reserve(positions.size());
    for (const auto& r : positions) config.path.push_back(r.y());
    config.positions = std::move(positions);
    config.geometry_tag = std::move(tag);
    config.sites_used = static_cast<int>(config.positions.size());
    return config;
}

void to_json(nlohmann::json& j, const AtomConfig& config) {
    auto positions = nlohmann::json::array();
    for (const auto& r : config.positions) positions.push_back({r.x(), r.y(), r.z()});
    j = nlohmann::json{{"geometry_tag", config.geometry_tag},
                       {"positions", std::move(positions)},
                       {"path", config.path}};
    if (config.loop_length) j["loop_length"] = *config.loop_length;
}

void from_json(const nlohmann::json& j, AtomConfig& config) {
    config = AtomConfig{};
    config.geometry_tag = j.at("geometry_tag").get<std::string>();
    for (const auto& p : j.at("positions")) {
        config.positions.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(),
                                      p.at(2).get<double>());
    }
    if (j.contains("path")) {
        config.path = j.at("path").get<std::vector<double>>();
    } else {
        for (const auto& r : config.positions) config.path.push_back(r.y());
    }
    if (j.contains("loop_length")) config.loop_length = j.at("loop_length").get<double>();
    config.sites_used = static_cast<int>(config.positions.size());
    config.validate();
}

std::string to_string(ArrayShape shape) {
    return shape == ArrayShape::ring ? "ring" : "line";
}

ArrayShape array_shape_from_string(const std::string& name) {
    if (name == "line") return ArrayShape::line;
    if (name == "ring") return ArrayShape::ring;
    throw InvalidArgument("unknown array shape '" + name + "' (expected line or ring)");
}

}  // namespace ringqed
