#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "siht/complexity.hpp"
#include "siht/experiment.hpp"
#include "siht/measurement.hpp"
#include "siht/recovery.hpp"
#include "siht/ric.hpp"
#include "siht/sparse.hpp"

namespace py = pybind11;
using namespace siht;

namespace {

SparseSignal as_signal(const Vector& v, std::size_t k) { return SparseSignal(v, k); }

SparseSignal start_point(const std::optional<Vector>& x0, std::size_t n, std::size_t k)
{
    return x0 ? as_signal(*x0, k) : SparseSignal::zero(n, k);
}

std::optional<SparseSignal> optional_truth(const std::optional<Vector>& truth, std::size_t k)
{
    if (!truth)
        return std::nullopt;
    return as_signal(*truth, k);
}

RecoveryOptions options_for(std::optional<double> stop_at_error)
{
    RecoveryOptions o;
    o.stop_at_error = stop_at_error;
    return o;
}

py::dict trace_dict(const RecoveryTrace& t)
{
    py::dict d;
    d["estimate"] = t.final_estimate.values();
    d["iterations"] = t.iterations;
    d["errors"] = t.errors;
    d["residual_norms"] = t.residual_norms;
    d["final_error"] = t.has_truth() ? py::cast(t.final_error()) : py::none();
    return d;
}

py::dict breakdown_dict(const ComplexityBreakdown& b)
{
    py::dict d;
    d["s"] = b.phase_count;
    d["p"] = b.fractions;
    d["p_bar"] = b.p_bar;
    d["a_m"] = b.arithmetic_mean;
    d["g_m"] = b.geometric_mean;
    d["md"] = b.dynamic_complexity;
    return d;
}

ExperimentConfig make_config(std::size_t n, std::size_t t, const std::vector<std::size_t>& ks,
                             std::size_t trials, double threshold, const std::string& ensemble,
                             std::uint64_t seed, std::size_t workers)
{
    ExperimentConfig c;
    c.dimension = n;
    c.horizon = t;
    c.sparsity_grid = ks;
    c.trials = trials;
    c.threshold = threshold;
    c.ensemble.family = parse_ensemble(ensemble);
    c.master_seed = seed;
    c.workers = workers;
    return c;
}

}  // namespace

PYBIND11_MODULE(_siht, m)
{
    m.doc() = "Sequential iterative hard thresholding (native core).";

    py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("hard_threshold", &hard_threshold, py::arg("v"), py::arg("k"),
          "Keep the k largest-magnitude entries; ties go to the lower index.");
    m.def(
        "support", [](const Vector& v) { return support(v).indices(); }, py::arg("v"));

    m.def(
        "sample_matrix",
        [](const std::string& ensemble, std::size_t rows, std::size_t cols, std::uint64_t seed) {
            return sample_matrix({parse_ensemble(ensemble)}, rows, cols, seed);
        },
        py::arg("ensemble"), py::arg("rows"), py::arg("cols"), py::arg("seed"));
    m.def(
        "sample_signal",
        [](std::size_t n, std::size_t k, std::uint64_t seed) {
            return sample_signal(n, k, seed).values();
        },
        py::arg("n"), py::arg("k"), py::arg("seed"));
    m.def("draw_phase_sizes", &draw_phase_sizes, py::arg("a"), py::arg("b"), py::arg("s"),
          py::arg("seed"));

    m.def(
        "iht_step",
        [](const Vector& x, const Matrix& phi, const Vector& y, std::size_t k) {
            return iht_step(as_signal(x, k), MeasurementPhase{phi, y}, k).values();
        },
        py::arg("x"), py::arg("phi"), py::arg("y"), py::arg("k"));

    m.def(
        "run_offline_iht",
        [](const Matrix& phi, const Vector& y, std::size_t k, std::size_t iterations,
           std::optional<Vector> x0, std::optional<Vector> truth,
           std::optional<double> stop_at_error) {
            const auto n = static_cast<std::size_t>(phi.cols());
            return trace_dict(run_offline_iht(MeasurementPhase{phi, y}, k, iterations,
                                              start_point(x0, n, k), optional_truth(truth, k),
                                              options_for(stop_at_error)));
        },
        py::arg("phi"), py::arg("y"), py::arg("k"), py::arg("iterations"),
        py::arg("x0") = py::none(), py::arg("truth") = py::none(),
        py::arg("stop_at_error") = py::none());

    m.def(
        "run_siht",
        [](const std::vector<std::pair<Matrix, Vector>>& phases,
           const std::vector<std::size_t>& durations, std::size_t k, std::optional<Vector> x0,
           std::optional<Vector> truth, std::optional<double> stop_at_error) {
            if (phases.empty())
                throw std::invalid_argument("run_siht: no phases");
            std::vector<MeasurementPhase> list;
            for (const auto& [phi, y] : phases)
                list.push_back(MeasurementPhase{phi, y});
            const auto n = static_cast<std::size_t>(list.front().cols());
            return trace_dict(run_siht(PhaseSchedule::from_durations(durations), stream_from(list),
                                       k, start_point(x0, n, k), optional_truth(truth, k),
                                       options_for(stop_at_error)));
        },
        py::arg("phases"), py::arg("durations"), py::arg("k"), py::arg("x0") = py::none(),
        py::arg("truth") = py::none(), py::arg("stop_at_error") = py::none(),
        "phases: list of (Phi_j, y_j); durations: tau_j per phase.");

    m.def(
        "dynamic_sample_complexity",
        [](const std::vector<std::size_t>& measurements,
           std::optional<std::vector<std::size_t>> durations,
           std::optional<std::vector<double>> fractions) {
            if (durations && fractions)
                throw std::invalid_argument("give durations or fractions, not both");
            if (fractions)
                return breakdown_dict(dynamic_sample_complexity(measurements, *fractions));
            const auto schedule = durations ? PhaseSchedule::from_durations(*durations)
                                            : PhaseSchedule::per_step(measurements.size());
            return breakdown_dict(dynamic_sample_complexity(measurements, schedule));
        },
        py::arg("measurements"), py::arg("durations") = py::none(),
        py::arg("fractions") = py::none());
    m.def("theorem_rhs", &theorem_rhs, py::arg("k"), py::arg("n"), py::arg("epsilon"),
          py::arg("c_tilde") = 96.0);
    m.def("expected_md_lower_bound", &expected_md_lower_bound, py::arg("a"), py::arg("b"));
    m.def(
        "estimate_expected_md",
        [](std::size_t a, std::size_t b, std::size_t s, std::size_t trials, std::uint64_t seed,
           std::size_t workers) {
            const auto e = estimate_expected_md(a, b, s, trials, seed, workers);
            return py::make_tuple(e.mean, e.std_error);
        },
        py::arg("a"), py::arg("b"), py::arg("s"), py::arg("trials"), py::arg("seed"),
        py::arg("workers") = 1, "Returns (mean, standard error).");

    m.def(
        "ric",
        [](const Matrix& phi, std::size_t order, std::size_t cap) {
            const auto r = ric(phi, order, cap);
            return py::make_tuple(r.value, r.witness.indices());
        },
        py::arg("phi"), py::arg("order"), py::arg("cap") = default_subset_cap,
        "Exact RIC of the given order by subset enumeration. Returns (value, witness).");
    m.def("symmetric_eigenvalues", &symmetric_eigenvalues, py::arg("a"));

    m.def(
        "recovery_sweep",
        [](const std::vector<std::size_t>& ks, std::size_t a, std::size_t b,
           const std::vector<std::size_t>& offline_m, std::size_t n, std::size_t t,
           std::size_t trials, double threshold, const std::string& ensemble, std::uint64_t seed,
           std::size_t workers) {
            const auto c = make_config(n, t, ks, trials, threshold, ensemble, seed, workers);
            std::vector<Arm> arms{Arm::siht(a, b)};
            for (std::size_t mm : offline_m)
                arms.push_back(Arm::offline(mm));
            py::list rows;
            for (const auto& r : run_recovery_sweep(c, arms).rows) {
                py::dict d;
                d["k"] = r.k;
                d["mode"] = std::string(to_string(r.arm.mode));
                if (r.arm.mode == Mode::siht) {
                    d["a"] = r.arm.a;
                    d["b"] = r.arm.b;
                } else {
                    d["m"] = r.arm.m;
                }
                d["trials"] = r.trials;
                d["successes"] = r.successes;
                d["probability"] = r.probability;
                d["mean_final_error"] = r.mean_final_error;
                rows.append(d);
            }
            return rows;
        },
        py::arg("ks"), py::arg("a") = 20, py::arg("b") = 150,
        py::arg("offline_m") = std::vector<std::size_t>{}, py::arg("n") = 1000,
        py::arg("t") = 100, py::arg("trials") = 100, py::arg("threshold") = 1e-3,
        py::arg("ensemble") = "gaussian", py::arg("seed") = 0, py::arg("workers") = 0);

    m.def(
        "phase_diagram",
        [](const std::vector<std::size_t>& a_values, const std::vector<std::size_t>& b_values,
           std::size_t k, std::size_t n, std::size_t t, std::size_t trials, double threshold,
           const std::string& ensemble, std::uint64_t seed, std::size_t workers) {
            PhaseDiagramConfig c;
            c.base = make_config(n, t, {k}, trials, threshold, ensemble, seed, workers);
            c.a_values = a_values;
            c.b_values = b_values;
            c.sparsity = k;
            const auto d = run_phase_diagram(c);
            // Rows follow a_values, columns b_values; NaN marks a > b.
            Matrix p(static_cast<Eigen::Index>(a_values.size()),
                     static_cast<Eigen::Index>(b_values.size()));
            for (std::size_t i = 0; i < a_values.size(); ++i)
                for (std::size_t j = 0; j < b_values.size(); ++j) {
                    const auto& cell = d.at(i, j);
                    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        cell.valid ? cell.probability : std::numeric_limits<double>::quiet_NaN();
                }
            return p;
        },
        py::arg("a_values"), py::arg("b_values"), py::arg("k") = 5, py::arg("n") = 1000,
        py::arg("t") = 100, py::arg("trials") = 50, py::arg("threshold") = 1e-3,
        py::arg("ensemble") = "gaussian", py::arg("seed") = 0, py::arg("workers") = 0);
}
