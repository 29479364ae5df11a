#include "ringqed/cavity.hpp"
#include "ringqed/config.hpp"
#include "ringqed/dynamics.hpp"
#include "ringqed/errors.hpp"
#include "ringqed/experiments.hpp"
#include "ringqed/free_space.hpp"
#include "ringqed/geometry.hpp"
#include "ringqed/io.hpp"
#include "ringqed/oracle.hpp"
#include "ringqed/runner.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ringqed;

namespace {

using Positions = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

Positions positions_of(const AtomConfig& c) {
    Positions p(static_cast<Eigen::Index>(c.size()), 3);
    for (std::size_t i = 0; i < c.size(); ++i) p.row(static_cast<Eigen::Index>(i)) = c.positions[i].transpose();
    return p;
}

AtomConfig config_from(const Positions& p) {
    std::vector<Vec3> v;
    for (Eigen::Index i = 0; i < p.rows(); ++i) v.emplace_back(p.row(i).transpose());
    return from_positions(std::move(v));
}

py::dict metrics_dict(const DecayMetrics& m) {
    auto opt = [](const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); };
    return py::dict("excitation"_a = m.excitation, "rate_c"_a = m.rates.cavity, "rate_f"_a = m.rates.free_space,
                    "d_rate_c"_a = m.d_rate_c, "d_rate_f"_a = m.d_rate_f, "gamma_f"_a = opt(m.gamma_f),
                    "gamma_c"_a = opt(m.gamma_c), "Gamma_f"_a = opt(m.Gamma_f), "Gamma_c"_a = opt(m.Gamma_c),
                    "Gamma_exp"_a = opt(m.Gamma_exp), "theta"_a = opt(m.theta));
}

py::dict sweep_dict(const SweepGrid& g) {
    py::dict axes, out;
    for (const auto& a : g.axes) axes[py::str(a.name)] = a.values;
    out["axes"] = axes;
    for (const auto& s : g.series) {
        out[py::str(s.name)] = py::dict("mean"_a = s.mean, "standard_error"_a = s.standard_error,
                                        "count"_a = s.count, "excluded"_a = s.excluded);
    }
    return out;
}

ExcitationKind kind_of(const std::string& name) { return excitation_from_string(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Collective decay of atoms coupled to a ring resonator and to free space";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<NearCoincidence>(m, "NearCoincidence", base.ptr());
    py::register_exception<DefectiveMatrix>(m, "DefectiveMatrix", base.ptr());
    py::register_exception<DarkPole>(m, "DarkPole", base.ptr());

    py::class_<CloudParams>(m, "CloudParams")
        .def(py::init<>())
        .def_readwrite("n_atoms", &CloudParams::n_atoms)
        .def_readwrite("sigma_x", &CloudParams::sigma_x)
        .def_readwrite("sigma_y", &CloudParams::sigma_y)
        .def_readwrite("sigma_z", &CloudParams::sigma_z)
        .def_readwrite("z_mean", &CloudParams::z_mean)
        .def_readwrite("poisson_n", &CloudParams::poisson_n);

    py::enum_<ArrayShape>(m, "ArrayShape").value("line", ArrayShape::line).value("ring", ArrayShape::ring);

    py::class_<ArrayParams>(m, "ArrayParams")
        .def(py::init<>())
        .def_readwrite("n_sites", &ArrayParams::n_sites)
        .def_readwrite("spacing", &ArrayParams::spacing)
        .def_readwrite("z_height", &ArrayParams::z_height)
        .def_readwrite("filling", &ArrayParams::filling)
        .def_readwrite("delta_z", &ArrayParams::delta_z)
        .def_readwrite("shape", &ArrayParams::shape)
        .def_readwrite("target_atoms", &ArrayParams::target_atoms);

    py::class_<CavityParams>(m, "CavityParams")
        .def(py::init<>())
        .def_readwrite("kappa_i", &CavityParams::kappa_i)
        .def_readwrite("kappa_e", &CavityParams::kappa_e)
        .def_readwrite("delta_c", &CavityParams::delta_c)
        .def_readwrite("n_eff", &CavityParams::n_eff)
        .def_readwrite("c_ref", &CavityParams::c_ref)
        .def_readwrite("z_ref", &CavityParams::z_ref)
        .def_readwrite("z_ev", &CavityParams::z_ev)
        .def_readwrite("eta", &CavityParams::eta)
        .def("evanescent_length", &CavityParams::evanescent_length)
        .def("g_ref", &CavityParams::g_ref);

    py::class_<AtomConfig>(m, "AtomConfig")
        .def_property_readonly("positions", &positions_of)
        .def_readonly("path", &AtomConfig::path)
        .def_readonly("loop_length", &AtomConfig::loop_length)
        .def_readonly("geometry_tag", &AtomConfig::geometry_tag)
        .def_readonly("sites_used", &AtomConfig::sites_used)
        .def("__len__", &AtomConfig::size);

    m.def("sample_cloud", &sample_cloud, "params"_a, "seed"_a);
    m.def("build_array", &build_array, "params"_a, "seed"_a = 0);
    m.def("from_positions", &config_from, "positions"_a, "Atoms at explicit (N, 3) positions in λ0 units");

    m.def("hankel0", &hankel0, "x"_a);
    m.def("hankel2", &hankel2, "x"_a);
    m.def("greens_pair", [](const Vec3& a, const Vec3& b) { return greens_pair(a, b); }, "r_i"_a, "r_j"_a);
    m.def("free_space_matrix", [](const AtomConfig& c) { return build_free_matrix(c).matrix; }, "config"_a);

    py::class_<CavityMatrix>(m, "CavityMatrix")
        .def_readonly("matrix", &CavityMatrix::matrix)
        .def_readonly("kappa_tilde", &CavityMatrix::kappa_tilde)
        .def_readonly("couplings", &CavityMatrix::couplings)
        .def_readonly("phases", &CavityMatrix::phases)
        .def_readonly("cooperativities", &CavityMatrix::cooperativities);
    m.def("cavity_matrix", &build_cavity_matrix, "config"_a, "params"_a, "uniform_c"_a = py::none());
    m.def("calibrate_cloud", &calibrate_cloud, "cloud"_a, "cavity"_a, "c1"_a);
    m.def("calibrate_array", &calibrate_array, "array"_a, "cavity"_a, "c1"_a);

    m.def(
        "eigendecompose",
        [](const CMatrix& mat) {
            const EigenSystem e = eigendecompose(mat);
            return py::make_tuple(e.lambdas, e.right, e.left);
        },
        "matrix"_a, "Eigenvalues, right vectors and left vectors with Lᵀ R = 1");

    m.def(
        "decay_metrics",
        [](const AtomConfig& c, const CavityParams& cavity, const std::string& excitation,
           std::optional<double> uniform_c, bool free_space) {
            RealizationOptions opts;
            opts.uniform_c = uniform_c;
            opts.free_space = free_space;
            const Realization r = assemble(c, cavity, opts);
            const ExcitationState s = excite(r, kind_of(excitation));
            py::dict d = metrics_dict(decay_metrics(s.sigma, r.coupling, r.cavity, r.free));
            d["eigenvalues"] = r.eig.lambdas;
            d["sigma"] = s.sigma;
            return d;
        },
        "config"_a, "cavity"_a, "excitation"_a = "tds", "uniform_c"_a = py::none(), "free_space"_a = true,
        "Initial-time decay metrics of one realization");

    m.def(
        "cloud_ensemble",
        [](const CloudParams& cloud, const CavityParams& cavity, double c1, const std::string& excitation,
           std::size_t trials, std::uint64_t seed, bool uniform_c, std::vector<double> k_scan, unsigned workers) {
            CloudEnsembleSpec spec;
            spec.cloud = cloud;
            spec.cavity = cavity;
            spec.c1 = c1;
            spec.excitation = kind_of(excitation);
            spec.trials = trials;
            spec.seed = seed;
            spec.uniform_c = uniform_c;
            spec.k_scan = std::move(k_scan);
            spec.workers = workers;
            const CloudEnsembleResult r = run_cloud_ensemble(spec);
            py::list out;
            for (std::size_t k = 0; k < r.stats.size(); ++k) {
                py::dict d("k_scale"_a = r.k_scale[k], "accepted"_a = r.stats[k].accepted,
                           "excluded"_a = r.stats[k].excluded);
                for (const auto& [name, ms] : r.stats[k].metrics) {
                    d[py::str(name)] = py::make_tuple(ms.stats.mean(), ms.stats.standard_error());
                }
                out.append(d);
            }
            return out;
        },
        "cloud"_a, "cavity"_a = CavityParams{}, "c1"_a = 0.05, "excitation"_a = "tds", "trials"_a = 1000,
        "seed"_a = 1, "uniform_c"_a = false, "k_scan"_a = std::vector<double>{}, "workers"_a = 0,
        "Ensemble (mean, standard error) of each decay metric, one entry per k value");

    m.def(
        "array_map",
        [](std::vector<double> spacings, std::vector<double> n_effs, int n_sites, double c1) {
            ArrayMapSpec spec;
            spec.base.n_sites = n_sites;
            spec.spacings = std::move(spacings);
            spec.n_effs = std::move(n_effs);
            spec.c1 = c1;
            return sweep_dict(sweep_array_map(spec));
        },
        "spacings"_a, "n_effs"_a, "n_sites"_a = 20, "c1"_a = 0.05);

    m.def(
        "ring_vs_line",
        [](std::vector<int> n_values, double spacing, double c1) {
            LineRingSpec spec;
            spec.n_values = std::move(n_values);
            spec.spacing = spacing;
            spec.c1 = c1;
            return sweep_dict(compare_line_ring(spec));
        },
        "n_values"_a, "spacing"_a = 0.3, "c1"_a = 0.05);

    m.def(
        "spectrum",
        [](const CloudParams& cloud, const CavityParams& cavity, double c1, double half_width, std::size_t points,
           std::size_t trials, std::uint64_t seed, bool free_space, bool uniform_c) {
            SpectrumSpec spec;
            spec.geometry = cloud;
            spec.cavity = cavity;
            spec.c1 = c1;
            spec.detunings = detuning_grid(half_width, points);
            spec.trials = trials;
            spec.seed = seed;
            spec.free_space = free_space;
            spec.uniform_c = uniform_c;
            const SpectrumResult r = compute_spectrum(spec);
            return py::dict("detunings"_a = r.detunings, "transmission"_a = r.transmission,
                            "extinction"_a = r.extinction, "fwhm"_a = r.fit.fwhm, "center"_a = r.fit.center,
                            "flagged"_a = r.flagged(), "accepted"_a = r.accepted, "excluded"_a = r.excluded);
        },
        "cloud"_a, "cavity"_a = CavityParams{}, "c1"_a = 0.05, "half_width"_a = 10.0, "points"_a = 201,
        "trials"_a = 200, "seed"_a = 1, "free_space"_a = true, "uniform_c"_a = false);

    m.def(
        "compare_models",
        [](const AtomConfig& c, const CavityParams& cavity, double t_end) {
            oracle::ComparisonSpec spec;
            spec.config = c;
            spec.cavity = cavity;
            spec.t_end = t_end;
            const oracle::ComparisonReport r = oracle::compare_models(spec);
            return py::dict("eigen_vs_eliminated"_a = r.eigen_vs_eliminated.max(),
                            "eliminated_vs_full"_a = r.eliminated_vs_full.max(), "pass"_a = r.pass());
        },
        "config"_a, "cavity"_a = CavityParams{}, "t_end"_a = 5.0,
        "Eigenmode path vs density-matrix propagation with and without the explicit cavity mode");

    m.def("experiments", &experiment_names);
    m.def("emit_config", [](const std::string& name) { return emit_config(experiment_from_string(name)); },
          "experiment"_a, "Commented default YAML configuration");
    m.def(
        "run",
        [](const std::string& yaml, std::optional<std::filesystem::path> out) {
            RunConfig c = parse_config_text(yaml);
            if (out) c.out = *out;
            const RunOutcome r = [&] {
                py::gil_scoped_release release;
                return ringqed::run(c);
            }();
            return py::dict("summary"_a = r.summary, "files"_a = r.files, "pass"_a = r.pass);
        },
        "config_yaml"_a, "out"_a = py::none(), "Run an experiment from YAML text; writes CSV and JSON outputs");
    m.def("content_hash", [](const std::string& s) { return content_hash(s); }, "content"_a);
}
