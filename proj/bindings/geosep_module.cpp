// geosep._core: python bindings for the solver and certificate operations.

#include "geosep/certificates.hpp"
#include "geosep/frame.hpp"
#include "geosep/partition.hpp"
#include "geosep/solver.hpp"
#include "geosep/types.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace geosep;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint data completion + geometric separation: l1-analysis solver, "
            "sparsity defect delta, joint concentration kappa and the recovery "
            "bound 2*delta/(1-2*kappa).";

  py::register_exception<CutoffExceeded>(m, "CutoffExceeded", PyExc_RuntimeError);
  py::register_exception<OracleFailure>(m, "OracleFailure", PyExc_RuntimeError);

  py::class_<ParsevalFrame>(m, "Frame", "Analysis operator of a Parseval frame")
      .def(py::init(&parse_frame_spec), py::arg("spec"),
           "Build from a spec string: identity:n=64 | dct:n=64 | haar:n=64 | "
           "random:m=96,n=64,seed=7 | union:dct+identity:n=64 | csv:PATH")
      .def(py::init<Mat, std::string>(), py::arg("analysis"), py::arg("label") = "custom")
      .def_property_readonly("rows", &ParsevalFrame::rows)
      .def_property_readonly("cols", &ParsevalFrame::cols)
      .def_property_readonly("label", &ParsevalFrame::label)
      .def_property_readonly("analysis", &ParsevalFrame::analysis)
      .def("analyze", &ParsevalFrame::analyze, py::arg("x"))
      .def("synthesize", &ParsevalFrame::synthesize, py::arg("coeffs"))
      .def("verify_parseval", &ParsevalFrame::verify_parseval)
      .def("__repr__",
           [](const ParsevalFrame& f) { return "<geosep.Frame " + f.label() + ">"; });

  m.def("identity_frame", &identity_frame, py::arg("n"));
  m.def("dct_frame", &dct_frame, py::arg("n"));
  m.def("haar_frame", &haar_frame, py::arg("n"));
  m.def("union_frame", &union_frame, py::arg("f1"), py::arg("f2"));
  m.def("random_tight_frame", &random_tight_frame, py::arg("m"), py::arg("n"), py::arg("seed"));

  py::class_<CoordinatePartition>(m, "Partition", "Known/missing coordinate split")
      .def(py::init<int, IndexSet>(), py::arg("n"), py::arg("known"))
      .def_property_readonly("n", &CoordinatePartition::dimension)
      .def_property_readonly("known", &CoordinatePartition::known)
      .def_property_readonly("missing", &CoordinatePartition::missing)
      .def("__repr__", [](const CoordinatePartition& p) {
        return "<geosep.Partition n=" + std::to_string(p.dimension()) + " known=" +
               std::to_string(p.known().size()) + ">";
      });

  m.def("project_known", &project_known, py::arg("x"), py::arg("partition"));
  m.def("project_missing", &project_missing, py::arg("x"), py::arg("partition"));
  m.def("lp_norm", &lp_norm, py::arg("x"), py::arg("p"));

  py::class_<SupportPair>(m, "Supports", "Index sets Lambda1, Lambda2")
      .def(py::init([](IndexSet l1, IndexSet l2) {
             return SupportPair{std::move(l1), std::move(l2)};
           }),
           py::arg("lambda1"), py::arg("lambda2"))
      .def_readwrite("lambda1", &SupportPair::lambda1)
      .def_readwrite("lambda2", &SupportPair::lambda2);

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("delta", &Certificate::delta)
      .def_readonly("kappa", &Certificate::kappa)
      .def_property_readonly("kappa_kind",
                             [](const Certificate& c) { return to_string(c.kappa_kind); })
      .def_readonly("bound", &Certificate::bound)
      .def_readonly("degenerate", &Certificate::degenerate)
      .def("certified", &Certificate::certified)
      .def("__repr__", [](const Certificate& c) {
        return "<geosep.Certificate delta=" + std::to_string(c.delta) + " kappa=" +
               std::to_string(c.kappa) + " (" + to_string(c.kappa_kind) + ")>";
      });

  m.def("compute_delta", &compute_delta, py::arg("f1"), py::arg("f2"), py::arg("x1"),
        py::arg("x2"), py::arg("supports"));
  m.def("select_supports", &select_supports, py::arg("f1"), py::arg("f2"), py::arg("x1"),
        py::arg("x2"), py::arg("k1"), py::arg("k2"));
  m.def("joint_ratio", &joint_ratio, py::arg("f1"), py::arg("f2"), py::arg("partition"),
        py::arg("supports"), py::arg("u"), py::arg("x"));
  m.def(
      "kappa_exact",
      [](const ParsevalFrame& f1, const ParsevalFrame& f2, const CoordinatePartition& p,
         const SupportPair& s, int cutoff, int threads) {
        KappaOptions opts;
        opts.cutoff = cutoff;
        opts.threads = threads;
        return kappa_exact(f1, f2, p, s, opts);
      },
      py::arg("f1"), py::arg("f2"), py::arg("partition"), py::arg("supports"),
      py::arg("cutoff") = kDefaultKappaCutoff, py::arg("threads") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def("kappa_lower_estimate", &kappa_lower_estimate, py::arg("f1"), py::arg("f2"),
        py::arg("partition"), py::arg("supports"), py::arg("samples") = 1000,
        py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("error_bound", &error_bound, py::arg("delta"), py::arg("kappa"));
  m.def(
      "certify",
      [](const ParsevalFrame& f1, const ParsevalFrame& f2, const CoordinatePartition& p,
         const SupportPair& s, const Vec& x1, const Vec& x2, bool exact, int samples,
         std::uint64_t seed, int cutoff) {
        CertifyOptions opts;
        opts.exact = exact;
        opts.samples = samples;
        opts.seed = seed;
        opts.kappa.cutoff = cutoff;
        return certify(f1, f2, p, s, x1, x2, opts);
      },
      py::arg("f1"), py::arg("f2"), py::arg("partition"), py::arg("supports"), py::arg("x1"),
      py::arg("x2"), py::arg("exact") = true, py::arg("samples") = 1000, py::arg("seed") = 1,
      py::arg("cutoff") = kDefaultKappaCutoff, py::call_guard<py::gil_scoped_release>());

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("x1_star", &SolveResult::x1_star)
      .def_readonly("x2_star", &SolveResult::x2_star)
      .def_readonly("objective", &SolveResult::objective)
      .def_readonly("feasibility_residual", &SolveResult::feasibility_residual)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("converged", &SolveResult::converged)
      .def_property_readonly("method",
                             [](const SolveResult& r) { return to_string(r.method); })
      .def_readonly("residual_trace", &SolveResult::residual_trace)
      .def("__repr__", [](const SolveResult& r) {
        return "<geosep.SolveResult objective=" + std::to_string(r.objective) +
               " converged=" + (r.converged ? std::string("True") : std::string("False")) + ">";
      });

  m.def("soft_threshold", &soft_threshold, py::arg("v"), py::arg("t"));
  m.def("project_constraint", &project_constraint, py::arg("x1"), py::arg("x2"),
        py::arg("partition"), py::arg("known_values"));
  m.def("objective_value", &objective_value, py::arg("f1"), py::arg("f2"), py::arg("x1"),
        py::arg("x2"));
  m.def("feasibility_residual", &feasibility_residual, py::arg("x1"), py::arg("x2"),
        py::arg("partition"), py::arg("x0_known"));
  m.def(
      "solve_iterative",
      [](const ParsevalFrame& f1, const ParsevalFrame& f2, const CoordinatePartition& p,
         const Vec& x0_known, int max_iters, double tol, double step_primal, double step_dual,
         bool record_trace) {
        SolveOptions opts;
        opts.max_iters = max_iters;
        opts.tol = tol;
        opts.step_primal = step_primal;
        opts.step_dual = step_dual;
        opts.record_trace = record_trace;
        return solve_iterative(f1, f2, p, x0_known, opts);
      },
      py::arg("f1"), py::arg("f2"), py::arg("partition"), py::arg("x0_known"),
      py::arg("max_iters") = 100000, py::arg("tol") = 1e-9, py::arg("step_primal") = 0.99,
      py::arg("step_dual") = 0.99, py::arg("record_trace") = false,
      py::call_guard<py::gil_scoped_release>());
  m.def("solve_lp_exact", &solve_lp_exact, py::arg("f1"), py::arg("f2"), py::arg("partition"),
        py::arg("x0_known"), py::call_guard<py::gil_scoped_release>());
}
