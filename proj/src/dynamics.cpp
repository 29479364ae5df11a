#include "ringqed/dynamics.hpp"

#include "ringqed/errors.hpp"

#include <Eigen/SVD>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ringqed {

CouplingMatrix build_coupling(double delta_a, const CavityMatrix& cavity,
                              const FreeSpaceMatrix& free) {
    if (cavity.size() != free.size()) {
        throw DimensionMismatch("build_coupling: cavity and free-space matrices differ in size");
    }
    const Eigen::Index n = cavity.size();
    CouplingMatrix out;
    out.delta_a = delta_a;
    out.matrix = -cavity.matrix - free.matrix;
    out.matrix.diagonal().array() += delta_a;
    (void)n;
    return out;
}

double EigenSystem::biorthogonality_error() const {
    const CMatrix gram = left.transpose() * right;
    return (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double EigenSystem::residual(const CMatrix& m) const {
    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (Eigen::Index a = 0; a < size(); ++a) {
        const double r = (m * right.col(a) - lambdas(a) * right.col(a)).norm();
        const double l =
            (left.col(a).transpose() * m - lambdas(a) * left.col(a).transpose()).norm() /
            std::max(left.col(a).norm(), std::numeric_limits<double>::min());
        worst = std::max({worst, r / scale, l / scale});
    }
    return worst;
}

namespace {

// Groups eigenvalues closer than tol (transitively).
std::vector<std::vector<Eigen::Index>> clusters(const CVector& values, double tol) {
    const Eigen::Index n = values.size();
    std::vector<Eigen::Index> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Eigen::Index x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b)
            if (std::abs(values(a) - values(b)) <= tol) parent[find(a)] = find(b);

    std::vector<std::vector<Eigen::Index>> groups;
    std::vector<Eigen::Index> slot(n, -1);
    for (Eigen::Index a = 0; a < n; ++a) {
        const Eigen::Index root = find(a);
        if (slot[root] < 0) {
            slot[root] = static_cast<Eigen::Index>(groups.size());
            groups.emplace_back();
        }
        groups[slot[root]].push_back(a);
    }
    return groups;
}

// Unit norm with the largest component real and positive.
void fix_gauge(Eigen::Ref<CVector> v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    const cplx phase = v(k) / std::abs(v(k));
    v /= phase * v.norm();
}

}  // namespace

EigenSystem eigendecompose(const CMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("eigendecompose: matrix must be square");
    if (!m.allFinite()) throw InvalidArgument("eigendecompose: non-finite matrix");
    const Eigen::Index n = m.rows();

    // One LAPACK call yields eigenvalues with matched left and right vectors.
    CMatrix work = m;
    EigenSystem out;
    out.lambdas.resize(n);
    out.right.resize(n, n);
    CMatrix left_h(n, n);  // columns v with v^H M = λ v^H
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'V', 'V', static_cast<lapack_int>(n), work.data(),
                      static_cast<lapack_int>(n), out.lambdas.data(), left_h.data(),
                      static_cast<lapack_int>(n), out.right.data(), static_cast<lapack_int>(n));
    if (info != 0) throw DefectiveMatrix("eigendecompose: eigen solver did not converge");

    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    const double tol = 1e-8 * scale;

    out.left = left_h.conjugate();  // Lᵀ M = λ Lᵀ
    for (Eigen::Index a = 0; a < n; ++a) {
        fix_gauge(out.right.col(a));
        out.left.col(a).normalize();
    }

    for (const auto& group : clusters(out.lambdas, tol)) {
        const auto k = static_cast<Eigen::Index>(group.size());
        CMatrix r(n, k), l(n, k);
        for (Eigen::Index c = 0; c < k; ++c) {
            r.col(c) = out.right.col(group[c]);
            l.col(c) = out.left.col(group[c]);
        }
        const CMatrix overlap = l.transpose() * r;
        const double smallest =
            k == 1 ? std::abs(overlap(0, 0))
                   : Eigen::JacobiSVD<CMatrix>(overlap).singularValues().minCoeff();
        if (smallest < 1e-12) {
            throw DefectiveMatrix("eigendecompose: left/right overlap vanishes; "
                                  "matrix is not diagonalizable within tolerance");
        }
        const CMatrix l_new = l * overlap.inverse().transpose();
        for (Eigen::Index c = 0; c < k; ++c) out.left.col(group[c]) = l_new.col(c);
    }
    return out;
}

CVector mode_weights(const EigenSystem& eig, const CVector& sigma) {
    if (sigma.size() != eig.size()) throw DimensionMismatch("mode_weights: size mismatch");
    return eig.left.transpose() * sigma;
}

CVector weights_ss(const EigenSystem& eig, const CVector& omega, double delta_a) {
    const CVector projected = mode_weights(eig, omega);
    CVector w(eig.size());
    for (Eigen::Index a = 0; a < eig.size(); ++a) {
        const cplx pole = eig.lambdas(a) + delta_a;
        if (std::abs(pole) <= 1e-12) {
            throw DarkPole("weights_ss: lossless eigenmode resonant with the drive");
        }
        w(a) = -projected(a) / pole;
    }
    return w;
}

CVector weights_tds(const EigenSystem& eig, const CVector& omega, double eps) {
    const double norm = omega.norm();
    if (!(norm > 0)) throw ZeroDrive("weights_tds: drive vector is zero");
    if (!(eps > 0 && eps <= 0.1)) {
        throw InvalidArgument("weights_tds: amplitude must lie in (0, 0.1] (weak excitation)");
    }
    return mode_weights(eig, (eps / norm) * omega);
}

ExcitationState steady_state(const EigenSystem& eig, const CVector& omega, double delta_a) {
    ExcitationState s;
    s.kind = ExcitationKind::ss;
    s.weights = weights_ss(eig, omega, delta_a);
    s.sigma = eig.right * s.weights;
    return s;
}

ExcitationState timed_dicke_state(const EigenSystem& eig, const CVector& omega, double eps) {
    ExcitationState s;
    s.kind = ExcitationKind::tds;
    s.weights = weights_tds(eig, omega, eps);
    s.sigma = (eps / omega.norm()) * omega;
    return s;
}

CVector steady_state_direct(const CMatrix& m, const CVector& omega) {
    if (m.rows() != omega.size()) throw DimensionMismatch("steady_state_direct: size mismatch");
    return m.partialPivLu().solve(-omega);
}

ExcitationState evolve(const EigenSystem& eig, const ExcitationState& state, double t) {
    if (t < 0) throw InvalidArgument("evolve: time must be non-negative");
    ExcitationState out;
    out.kind = state.kind;
    out.weights = state.weights;
    for (Eigen::Index a = 0; a < eig.size(); ++a) {
        out.weights(a) *= std::exp(kI * eig.lambdas(a) * t);
    }
    out.sigma = eig.right * out.weights;
    return out;
}

namespace {

// i(G - G†): Hermitian, positive semidefinite for a passive channel.
CMatrix loss_operator(const CMatrix& g) {
    return kI * (g - g.adjoint());
}

double real_checked(cplx value, const char* what) {
    if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value.real()))) {
        throw NumericalConsistency(std::string(what) + ": imaginary residue in emission rate");
    }
    return value.real();
}

}  // namespace

EmissionRates emission_rates(const CVector& sigma, const CavityMatrix& cavity,
                             const FreeSpaceMatrix& free) {
    if (sigma.size() != cavity.size() || sigma.size() != free.size()) {
        throw DimensionMismatch("emission_rates: state and matrices differ in size");
    }
    EmissionRates r;
    r.cavity = real_checked(sigma.dot(loss_operator(cavity.matrix) * sigma), "R_c");
    r.free_space = real_checked(sigma.dot(loss_operator(free.matrix) * sigma), "R_f");
    return r;
}

DecayMetrics decay_metrics(const CVector& sigma0, const CouplingMatrix& m,
                           const CavityMatrix& cavity, const FreeSpaceMatrix& free) {
    DecayMetrics out;
    out.excitation = sigma0.squaredNorm();
    out.rates = emission_rates(sigma0, cavity, free);

    const CVector velocity = kI * (m.matrix * sigma0);
    out.d_rate_c = 2.0 * sigma0.dot(loss_operator(cavity.matrix) * velocity).real();
    out.d_rate_f = 2.0 * sigma0.dot(loss_operator(free.matrix) * velocity).real();

    const double e = out.excitation;
    const double rc = out.rates.cavity;
    const double rf = out.rates.free_space;
    const double r = rc + rf;
    if (!(e > 0)) return out;

    out.gamma_f = rf / e;
    out.gamma_c = rc / e;
    const double floor = 1e-14 * e;
    if (r > floor) {
        out.Gamma_f = -out.d_rate_f / r;
        out.Gamma_c = -out.d_rate_c / r;
    }
    if (rc > floor) out.Gamma_exp = -out.d_rate_c / rc;
    if (rc > floor && rf > floor) {
        const double slope_f = out.d_rate_f / rf;
        if (std::abs(slope_f) > 1e-12) out.theta = (out.d_rate_c / rc) / slope_f;
    }
    return out;
}

std::vector<double> default_time_grid(std::size_t points, double t_min, double t_max) {
    std::vector<double> t(points);
    if (points == 1) {
        t[0] = t_min;
        return t;
    }
    const double ratio = std::log(t_max / t_min);
    for (std::size_t k = 0; k < points; ++k) {
        t[k] = t_min * std::exp(ratio * static_cast<double>(k) / static_cast<double>(points - 1));
    }
    return t;
}

EmissionRecord emission_record(const EigenSystem& eig, const ExcitationState& state0,
                               const CouplingMatrix& m, const CavityMatrix& cavity,
                               const FreeSpaceMatrix& free, const std::vector<double>& times) {
    EmissionRecord rec;
    rec.times = times;
    rec.eigenvalues = eig.lambdas;
    rec.metrics = decay_metrics(state0.sigma, m, cavity, free);
    for (const double t : times) {
        const ExcitationState s = evolve(eig, state0, t);
        const EmissionRates rates = emission_rates(s.sigma, cavity, free);
        rec.rate_c.push_back(rates.cavity);
        rec.rate_f.push_back(rates.free_space);
        rec.excitation.push_back(s.excitation());
    }
    return rec;
}

double photon_budget(const EigenSystem& eig, const ExcitationState& state0,
                     const CavityMatrix& cavity, const FreeSpaceMatrix& free) {
    const CMatrix loss = loss_operator(cavity.matrix) + loss_operator(free.matrix);
    const CMatrix overlap = eig.right.adjoint() * loss * eig.right;
    cplx total = 0.0;
    for (Eigen::Index a = 0; a < eig.size(); ++a) {
        for (Eigen::Index b = 0; b < eig.size(); ++b) {
            const cplx rate = eig.lambdas(b) - std::conj(eig.lambdas(a));
            total += std::conj(state0.weights(a)) * state0.weights(b) * overlap(a, b) * kI / rate;
        }
    }
    return total.real();
}

}  // namespace ringqed
