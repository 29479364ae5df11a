// lorentzian.hpp — least-squares Lorentzian line fit.
#pragma once

#include <optional>
#include <span>

namespace ringqed {

struct LorentzianFit {
    double center = 0.0;
    double fwhm = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double residual = 0.0;  // RMS of y - model
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;  // no resolvable line in the data

    double operator()(double x) const;
};

// y = offset + amplitude / (1 + ((x - center)/(fwhm/2))²). Requires at least
// 8 finite points. Initial guess from the extreme point and its half-maximum
// crossings.
LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> y);

}  // namespace ringqed
