// free_space.hpp — vacuum dipole-dipole interaction matrix.
//
// For a σ+ transition quantized along x the pair coupling is
//   G_ij = -i(Γ0/2) [h0(k0 r) + c(θ) h2(k0 r)],   c(θ) = (1 - 3cos²θ)/4,
// with θ the angle between r_ij and the x axis and h_l the outgoing
// spherical Hankel functions. J_ij = Re G_ij, Γ_ij = -2 Im G_ij.
#pragma once

#include "ringqed/geometry.hpp"
#include "ringqed/units.hpp"

namespace ringqed {

inline constexpr double kCoincidenceThreshold = 1e-9;

struct FreeSpaceMatrix {
    CMatrix matrix;  // complex symmetric, diagonal -i/2

    Eigen::Index size() const { return matrix.rows(); }
    // Γ_ij = -2 Im G_ij, the real symmetric dissipation matrix.
    RMatrix dissipation() const { return -2.0 * matrix.imag(); }
};

// (1 - 3cos²θ)/4 with θ measured from the x axis.
double polarization_coefficient(const Vec3& separation);

// h0(x) and h2(x), outgoing spherical Hankel functions of the first kind.
cplx hankel0(double x);
cplx hankel2(double x);

cplx greens_pair(const Vec3& r_i, const Vec3& r_j);

FreeSpaceMatrix build_free_matrix(const AtomConfig& config);

// Independent emitters: only the single-atom -iΓ0/2 diagonal.
FreeSpaceMatrix independent_emitters(Eigen::Index n);

}  // namespace ringqed
