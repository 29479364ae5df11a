#include "ringqed/lorentzian.hpp"

#include "ringqed/errors.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace ringqed {

double LorentzianFit::operator()(double x) const {
    const double u = (x - center) / (fwhm / 2.0);
    return offset + amplitude / (1.0 + u * u);
}

namespace {

// Parameters p = (center, fwhm, amplitude, offset) in normalized units.
struct LorentzianResidual : Eigen::DenseFunctor<double> {
    LorentzianResidual(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
        : Eigen::DenseFunctor<double>(4, static_cast<int>(x.size())), x(x), y(y) {}

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            const double u = (x(k) - p(0)) / (p(1) / 2.0);
            f(k) = p(3) + p(2) / (1.0 + u * u) - y(k);
        }
        return 0;
    }

    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            const double half = p(1) / 2.0;
            const double u = (x(k) - p(0)) / half;
            const double denom = 1.0 + u * u;
            const double common = 2.0 * p(2) * u / (denom * denom);
            jac(k, 0) = common / half;
            jac(k, 1) = common * u / p(1);
            jac(k, 2) = 1.0 / denom;
            jac(k, 3) = 1.0;
        }
        return 0;
    }

    Eigen::VectorXd x, y;
};

// Linear interpolation of the half-maximum crossing walking from `peak` in
// direction `step`.
std::optional<double> half_crossing(const Eigen::VectorXd& x, const Eigen::VectorXd& dev,
                                    Eigen::Index peak, int step, double half) {
    for (Eigen::Index k = peak; k + step >= 0 && k + step < x.size(); k += step) {
        const Eigen::Index next = k + step;
        if (std::abs(dev(next)) <= half) {
            const double a = std::abs(dev(k)) - half;
            const double b = half - std::abs(dev(next));
            return x(k) + (x(next) - x(k)) * a / std::max(a + b, 1e-300);
        }
    }
    return std::nullopt;
}

}  // namespace

LorentzianFit fit_lorentzian(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DimensionMismatch("fit_lorentzian: x and y differ in length");
    if (xs.size() < 8) throw InvalidArgument("fit_lorentzian: need at least 8 points");
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) {
            throw InvalidArgument("fit_lorentzian: non-finite input");
        }
    }
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(xs.data(), n);
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), n);

    // Normalize both axes to O(1).
    const double x_mid = (x.maxCoeff() + x.minCoeff()) / 2.0;
    const double x_scale = std::max((x.maxCoeff() - x.minCoeff()) / 2.0, 1e-300);
    const double y_ref = y.mean();
    const double y_span = y.maxCoeff() - y.minCoeff();

    LorentzianFit fit;
    if (!(y_span > 1e-14 * std::max(1.0, y.cwiseAbs().maxCoeff()))) {
        fit.offset = y_ref;
        fit.degenerate = true;
        return fit;
    }
    const Eigen::VectorXd xn = (x.array() - x_mid) / x_scale;
    const Eigen::VectorXd yn = (y.array() - y_ref) / y_span;

    // Initial guess: offset from the edges, line at the extreme deviation.
    const Eigen::Index edge = std::max<Eigen::Index>(1, n / 10);
    const double offset0 = (yn.head(edge).mean() + yn.tail(edge).mean()) / 2.0;
    const Eigen::VectorXd dev = yn.array() - offset0;
    Eigen::Index peak = 0;
    dev.cwiseAbs().maxCoeff(&peak);
    const double amp0 = dev(peak);
    const auto left = half_crossing(xn, dev, peak, -1, std::abs(amp0) / 2.0);
    const auto right = half_crossing(xn, dev, peak, +1, std::abs(amp0) / 2.0);
    double width0 = 0.5;
    if (left && right) {
        width0 = *right - *left;
    } else if (left || right) {
        width0 = 2.0 * std::abs((left ? *left : *right) - xn(peak));
    }
    width0 = std::max(width0, 1e-6);

    Eigen::VectorXd p(4);
    p << xn(peak), width0, amp0, offset0;
    LorentzianResidual functor(xn, yn);
    Eigen::LevenbergMarquardt<LorentzianResidual> lm(functor);
    lm.setXtol(1e-9);
    lm.setFtol(1e-15);
    lm.setGtol(0.0);
    lm.setMaxfev(500);
    const auto status = lm.minimize(p);

    using Status = Eigen::LevenbergMarquardtSpace::Status;
    fit.converged = status == Status::XtolTooSmall || status == Status::RelativeErrorTooSmall ||
                    status == Status::RelativeReductionTooSmall ||
                    status == Status::RelativeErrorAndReductionTooSmall ||
                    status == Status::FtolTooSmall;
    fit.iterations = static_cast<int>(lm.iterations());
    fit.center = x_mid + p(0) * x_scale;
    fit.fwhm = std::abs(p(1)) * x_scale;
    fit.amplitude = p(2) * y_span;
    fit.offset = y_ref + p(3) * y_span;

    double sq = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) sq += std::pow(fit(x(k)) - y(k), 2);
    fit.residual = std::sqrt(sq / static_cast<double>(n));
    // A line much narrower than the grid spacing or wider than the window
    // is not resolved by the data.
    const double span = x.maxCoeff() - x.minCoeff();
    if (!std::isfinite(fit.fwhm) || fit.fwhm > 100.0 * span ||
        std::abs(fit.amplitude) < 1e-9 * y_span) {
        fit.degenerate = true;
    }
    return fit;
}

}  // namespace ringqed
