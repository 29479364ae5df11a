#include "ringqed/free_space.hpp"

#include "ringqed/errors.hpp"

#include <cmath>
#include <fmt/format.h>

namespace ringqed {

double polarization_coefficient(const Vec3& separation) {
    const double r = separation.norm();
    const double cos_theta = separation.x() / r;
    return (1.0 - 3.0 * cos_theta * cos_theta) / 4.0;
}

// Closed forms above x = 1; below, the spherical Bessel functions avoid the
// cancellation in j2 (and hence in Γ_ij as r -> 0).
cplx hankel0(double x) {
    if (x < 1.0) return {std::sph_bessel(0, x), std::sph_neumann(0, x)};
    return {std::sin(x) / x, -std::cos(x) / x};
}

cplx hankel2(double x) {
    if (x < 1.0) return {std::sph_bessel(2, x), std::sph_neumann(2, x)};
    const double s = std::sin(x), c = std::cos(x);
    const double a = 3.0 / (x * x) - 1.0;
    return {a * s / x - 3.0 * c / (x * x), -a * c / x - 3.0 * s / (x * x)};
}

cplx greens_pair(const Vec3& r_i, const Vec3& r_j) {
    const Vec3 separation = r_i - r_j;
    const double r = separation.norm();
    if (!(r > kCoincidenceThreshold)) {
        throw NearCoincidence(fmt::format("atoms closer than {:g} lambda0 (r = {:g})",
                                          kCoincidenceThreshold, r),
                              std::nullopt);
    }
    const double x = UnitSystem::k0 * r;
    const double c = polarization_coefficient(separation);
    return -kI * (UnitSystem::gamma0 / 2.0) * (hankel0(x) + c * hankel2(x));
}

FreeSpaceMatrix build_free_matrix(const AtomConfig& config) {
    const auto n = static_cast<Eigen::Index>(config.size());
    FreeSpaceMatrix out{CMatrix::Zero(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.matrix(i, i) = -kI * (UnitSystem::gamma0 / 2.0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto& ri = config.positions[i];
            const auto& rj = config.positions[j];
            if (!((ri - rj).norm() > kCoincidenceThreshold)) {
                throw NearCoincidence(
                    fmt::format("atoms {} and {} closer than {:g} lambda0", i, j,
                                kCoincidenceThreshold),
                    std::pair<std::size_t, std::size_t>(i, j));
            }
            const cplx g = greens_pair(ri, rj);
            out.matrix(i, j) = g;
            out.matrix(j, i) = g;
        }
    }
    return out;
}

FreeSpaceMatrix independent_emitters(Eigen::Index n) {
    FreeSpaceMatrix out{CMatrix::Zero(n, n)};
    out.matrix.diagonal().setConstant(-kI * (UnitSystem::gamma0 / 2.0));
    return out;
}

}  // namespace ringqed
