// Copyright 2026 The crb-compress Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crbc/betalaw.hpp"
#include "crbc/cxla.hpp"
#include "crbc/error.hpp"
#include "crbc/fisher.hpp"
#include "crbc/mcharness.hpp"
#include "crbc/planner.hpp"
#include "crbc/randcomp.hpp"
#include "crbc/sigmodel.hpp"

namespace py = pybind11;
using namespace crbc;

namespace {

UlaScenario make_scenario(Eigen::Index n, const std::vector<double>& theta, std::optional<std::vector<double>> amplitude,
                          std::optional<std::vector<double>> phase) {
  UlaScenario s{n, {}};
  for (std::size_t k = 0; k < theta.size(); ++k) {
    UlaSource src;
    src.theta = theta[k];
    if (amplitude) src.amplitude = amplitude->at(k);
    if (phase) src.phase = phase->at(k);
    s.sources.push_back(src);
  }
  s.validate();
  return s;
}

py::dict summary_to_dict(const ExperimentSummary& s) {
  py::dict stats;
  for (const auto& st : s.statistics) {
    py::dict d;
    d["samples"] = py::array_t<double>(static_cast<py::ssize_t>(st.samples.size()), st.samples.data());
    d["trials"] = st.trials;
    d["mean"] = st.mean;
    d["variance"] = st.variance;
    d["reference_mean"] = st.reference_mean ? py::cast(*st.reference_mean) : py::none();
    d["reference_variance"] = st.reference_variance ? py::cast(*st.reference_variance) : py::none();
    if (st.ks) {
      d["ks"] = py::dict(py::arg("statistic") = st.ks->statistic, py::arg("critical") = st.ks->critical,
                         py::arg("alpha") = st.ks->alpha, py::arg("pass") = st.ks->pass);
    } else {
      d["ks"] = py::none();
    }
    d["mean_matrix"] = st.mean_matrix ? py::cast(*st.mean_matrix) : py::none();
    d["frobenius_error"] = st.frobenius_error ? py::cast(*st.frobenius_error) : py::none();
    stats[py::str(st.name)] = d;
  }
  py::dict diag;
  diag["min_w_eigenvalue"] = s.diagnostics.min_w_eigenvalue;
  diag["max_w_eigenvalue"] = s.diagnostics.max_w_eigenvalue;
  diag["min_crb_gap"] = s.diagnostics.min_crb_gap;
  diag["max_ellipse_ratio"] = s.diagnostics.max_ellipse_ratio;
  py::dict out;
  out["n"] = s.n;
  out["m"] = s.m;
  out["p"] = s.p;
  out["trials"] = s.trials;
  out["excluded_trials"] = s.excluded_trials;
  out["statistics"] = stats;
  out["diagnostics"] = diag;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fisher information and Cramer-Rao bounds under random compression";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<InfeasibleError> infeasible(m, "InfeasibleError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InfeasibleError& e) {
      PyErr_SetObject(infeasible.ptr(), py::make_tuple(e.what(), e.best_confidence()).ptr());
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), std::string(error_code_name(e.code()))).ptr());
    }
  });

  // Signal model.
  m.def("ula_mean",
        [](Eigen::Index n, const std::vector<double>& theta, std::optional<std::vector<double>> amplitude,
           std::optional<std::vector<double>> phase) { return ula_mean(make_scenario(n, theta, amplitude, phase)); },
        py::arg("n"), py::arg("theta"), py::arg("amplitude") = py::none(), py::arg("phase") = py::none());
  m.def("ula_jacobian",
        [](Eigen::Index n, const std::vector<double>& theta, std::optional<std::vector<double>> amplitude,
           std::optional<std::vector<double>> phase) {
          return ula_jacobian(make_scenario(n, theta, amplitude, phase));
        },
        py::arg("n"), py::arg("theta"), py::arg("amplitude") = py::none(), py::arg("phase") = py::none());
  m.def("two_source_angles", [](Eigen::Index n) { return UlaScenario::two_source(n).angles(); }, py::arg("n"));
  m.def("finite_diff_jacobian",
        [](FunctionModel::MeanFn mean, const RealVector& theta, Eigen::Index n, double h) {
          const FunctionModel model(n, theta.size(), std::move(mean));
          return finite_diff_jacobian(model, theta, h);
        },
        py::arg("mean"), py::arg("theta"), py::arg("n"), py::arg("h") = kDefaultFiniteDiffStep);

  // Fisher information.
  m.def("fim", [](const ComplexMatrix& g, double sigma2) { return fim(g, sigma2).j.matrix(); }, py::arg("g"),
        py::arg("sigma2") = 1.0);
  m.def("crb", [](const ComplexMatrix& g, double sigma2, Eigen::Index i) { return crb(fim(g, sigma2), i); },
        py::arg("g"), py::arg("sigma2"), py::arg("i"));
  m.def("crb_angle_form", &crb_angle_form, py::arg("g"), py::arg("sigma2"), py::arg("i"));
  m.def("compressed_fim",
        [](const ComplexMatrix& g, const ComplexMatrix& phi, double sigma2) {
          return compressed_fim(g, phi, sigma2).j.matrix();
        },
        py::arg("g"), py::arg("phi"), py::arg("sigma2") = 1.0);
  m.def("compressed_crb", &compressed_crb, py::arg("g"), py::arg("phi"), py::arg("sigma2"), py::arg("i"));
  m.def("normalized_fim",
        [](const ComplexMatrix& g, const ComplexMatrix& phi) {
          return normalized_fim(fim(g, 1.0), compressed_fim(g, phi, 1.0)).w.matrix();
        },
        py::arg("g"), py::arg("phi"));
  m.def("kl_divergence",
        [](const ComplexVector& x1, const ComplexVector& x2, const ComplexMatrix& c) {
          return kl_divergence(x1, x2, HermitianMatrix(c));
        },
        py::arg("x1"), py::arg("x2"), py::arg("c"));
  m.def("compressed_kl",
        [](const ComplexVector& x1, const ComplexVector& x2, const ComplexMatrix& c, const ComplexMatrix& phi) {
          return compressed_kl(x1, x2, HermitianMatrix(c), phi);
        },
        py::arg("x1"), py::arg("x2"), py::arg("c"), py::arg("phi"));

  // Compressors.
  m.def("sample_compressor",
        [](Eigen::Index rows, Eigen::Index cols, const std::string& family, std::uint64_t seed, std::uint64_t trial,
           double element_variance, const std::string& radial) {
          const CompressorSpec spec{rows, cols, parse_family(family), element_variance, parse_radial_law(radial),
                                    seed};
          return sample_trial(spec, trial);
        },
        py::arg("m"), py::arg("n"), py::arg("family") = "gaussian", py::arg("seed") = 0, py::arg("trial") = 0,
        py::arg("element_variance") = 1.0, py::arg("radial") = "chi");

  // Laws.
  py::class_<BetaLaw>(m, "BetaLaw")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_property_readonly("a", &BetaLaw::a)
      .def_property_readonly("b", &BetaLaw::b)
      .def("pdf", py::vectorize(&BetaLaw::pdf))
      .def("logpdf", py::vectorize(&BetaLaw::log_pdf))
      .def("cdf", py::vectorize(&BetaLaw::cdf))
      .def("sf", py::vectorize(&BetaLaw::sf))
      .def("quantile", py::vectorize(&BetaLaw::quantile))
      .def("mean", &BetaLaw::mean)
      .def("variance", &BetaLaw::variance)
      .def("__eq__", [](const BetaLaw& a, const BetaLaw& b) { return a == b; })
      .def("__repr__", [](const BetaLaw& b) {
        return "BetaLaw(" + std::to_string(b.a()) + ", " + std::to_string(b.b()) + ")";
      });
  m.def("crb_ratio_law", &crb_ratio_law, py::arg("n"), py::arg("m"), py::arg("p"));
  m.def("kl_ratio_law", &kl_ratio_law, py::arg("n"), py::arg("m"));
  m.def("ln_cmv_gamma", &ln_cmv_gamma, py::arg("p"), py::arg("a"));
  m.def("matrix_beta_logpdf",
        [](const ComplexMatrix& w, int m_, int n) {
          return matrix_beta_logpdf(HermitianMatrix(w), MatrixBetaLaw(static_cast<int>(w.rows()), m_, n));
        },
        py::arg("w"), py::arg("m"), py::arg("n"));
  m.def("eig_joint_logpdf",
        [](const RealVector& lambda, int m_, int n) {
          return eig_joint_logpdf(lambda, MatrixBetaLaw(static_cast<int>(lambda.size()), m_, n));
        },
        py::arg("eigenvalues"), py::arg("m"), py::arg("n"));
  m.def("moments",
        [](int n, int m_, const ComplexMatrix& j, Eigen::Index i) {
          const CompressionMoments mo = moments(n, m_, static_cast<int>(j.rows()), HermitianMatrix(j), i);
          py::dict d;
          d["mean_fim_scale"] = mo.mean_fim_scale;
          d["mean_crb"] = mo.mean_crb;
          d["var_crb"] = mo.var_crb ? py::cast(*mo.var_crb) : py::none();
          return d;
        },
        py::arg("n"), py::arg("m"), py::arg("j"), py::arg("i"));

  // Monte Carlo.
  m.def("ks_one_sample",
        [](const std::vector<double>& x, const std::function<double(double)>& cdf, double alpha) {
          const KsResult r = ks_one_sample(x, cdf, alpha);
          return py::make_tuple(r.statistic, r.critical, r.pass);
        },
        py::arg("samples"), py::arg("cdf"), py::arg("alpha") = 0.01);
  m.def("ks_two_sample",
        [](const std::vector<double>& a, const std::vector<double>& b, double alpha) {
          const KsResult r = ks_two_sample(a, b, alpha);
          return py::make_tuple(r.statistic, r.critical, r.pass);
        },
        py::arg("a"), py::arg("b"), py::arg("alpha") = 0.01);
  m.def("run_experiment",
        [](const ComplexMatrix& g, Eigen::Index m_, const std::vector<std::string>& statistics, std::size_t trials,
           const std::string& family, std::uint64_t seed, double sigma2, std::optional<ComplexVector> kl_delta,
           double element_variance, const std::string& radial, int bins, double alpha, unsigned threads,
           bool allow_law_violation) {
          ExperimentConfig c;
          c.jacobian = g;
          c.kl_delta = std::move(kl_delta);
          c.sigma2 = sigma2;
          c.compressor = CompressorSpec{m_, g.rows(), parse_family(family), element_variance,
                                        parse_radial_law(radial), seed};
          c.trials = trials;
          for (const auto& s : statistics) c.statistics.push_back(StatisticRequest::parse(s));
          c.histogram_bins = bins;
          c.alpha = alpha;
          c.threads = threads;
          c.allow_law_violation = allow_law_violation;
          ExperimentSummary s;
          {
            py::gil_scoped_release release;
            s = run(c);
          }
          return summary_to_dict(s);
        },
        py::arg("g"), py::arg("m"), py::arg("statistics"), py::arg("trials") = 10000,
        py::arg("family") = "gaussian", py::arg("seed") = 1, py::arg("sigma2") = 1.0,
        py::arg("kl_delta") = py::none(), py::arg("element_variance") = 1.0, py::arg("radial") = "chi",
        py::arg("bins") = 50, py::arg("alpha") = 0.01, py::arg("threads") = 0,
        py::arg("allow_law_violation") = false);

  // Planning.
  m.def("confidence_at", &confidence_at, py::arg("n"), py::arg("m"), py::arg("p"), py::arg("kappa"));
  m.def("min_measurements",
        [](int n, int p, double kappa, double confidence) {
          return min_measurements(PlanQuery{n, p, kappa, confidence});
        },
        py::arg("n"), py::arg("p"), py::arg("kappa"), py::arg("confidence"));
  m.def("curve",
        [](int n, int p, const std::vector<double>& kappas, const std::vector<double>& confidences) {
          py::list rows;
          for (const auto& r : curve(n, p, kappas, confidences)) {
            rows.append(py::make_tuple(r.kappa, r.confidence, r.m ? py::cast(*r.m) : py::none(),
                                       r.ratio(n) ? py::cast(*r.ratio(n)) : py::none(), r.achieved));
          }
          return rows;
        },
        py::arg("n"), py::arg("p"), py::arg("kappas"), py::arg("confidences"));
  m.def("ellipse_locus",
        [](const ComplexMatrix& j, double r2, int points) {
          const auto pts = ellipse_locus(HermitianMatrix(j), r2, points);
          RealMatrix out(static_cast<Eigen::Index>(pts.size()), 2);
          for (std::size_t k = 0; k < pts.size(); ++k) {
            out(static_cast<Eigen::Index>(k), 0) = pts[k][0];
            out(static_cast<Eigen::Index>(k), 1) = pts[k][1];
          }
          return out;
        },
        py::arg("j"), py::arg("r2"), py::arg("points") = 181);
}
