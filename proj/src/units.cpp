#include "ringqed/units.hpp"

#include "ringqed/errors.hpp"

#include <cmath>

namespace ringqed {

void Calibration::validate() const {
    if (!(lambda0_m > 0.0) || !std::isfinite(lambda0_m)) {
        throw InvalidCalibration("calibration: lambda0 must be positive");
    }
    if (!(gamma0_per_s > 0.0) || !std::isfinite(gamma0_per_s)) {
        throw InvalidCalibration("calibration: gamma0 must be positive");
    }
}

namespace {

double scale_for(QuantityKind kind, const Calibration& cal) {
    cal.validate();
    switch (kind) {
        case QuantityKind::time: return 1.0 / cal.gamma0_per_s;
        case QuantityKind::length: return cal.lambda0_m;
        case QuantityKind::rate: return cal.gamma0_per_s;
    }
    throw InvalidArgument("unknown quantity kind");
}

}  // namespace

double to_physical(double value, QuantityKind kind, const Calibration& cal) {
    return value * scale_for(kind, cal);
}

double from_physical(double value, QuantityKind kind, const Calibration& cal) {
    return value / scale_for(kind, cal);
}

}  // namespace ringqed
