// units.hpp — dimensionless unit system and shared numeric aliases.
//
// Internally every rate is measured in units of the single-atom free-space
// decay rate Γ0 and every length in units of the resonant wavelength λ0, so
// Γ0 = λ0 = 1 and k0 = 2π. Physical units appear only at I/O boundaries via
// Calibration.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace ringqed {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr cplx kI{0.0, 1.0};

struct UnitSystem {
    static constexpr double gamma0 = 1.0;
    static constexpr double lambda0 = 1.0;
    static constexpr double k0 = 2.0 * std::numbers::pi;
};

enum class QuantityKind { time, length, rate };

// Physical values of the two unit-defining constants.
struct Calibration {
    double lambda0_m = 852.0e-9;                          // resonant wavelength [m]
    double gamma0_per_s = 2.0 * std::numbers::pi * 5.22e6;  // decay rate [1/s]

    void validate() const;

    double lambda0_nm() const { return lambda0_m * 1e9; }
    double lifetime_s() const { return 1.0 / gamma0_per_s; }
};

// Converts a dimensionless value to SI (seconds, metres, 1/s).
double to_physical(double value, QuantityKind kind, const Calibration& cal);

// Inverse of to_physical.
double from_physical(double value, QuantityKind kind, const Calibration& cal);

// Convenience for the common case of lengths quoted in nanometres.
inline double nm_to_lambda0(double nm, const Calibration& cal) {
    return from_physical(nm * 1e-9, QuantityKind::length, cal);
}

}  // namespace ringqed
