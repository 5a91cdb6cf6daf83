// Python module exposing the core operations: Floquet construction,
// spectra, winding invariants, analytic edge modes, and the transfer
// diagnostics.  Table/plot/CLI plumbing stays C++-only.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qwalk/edge_analytics.hpp"
#include "qwalk/spectra.hpp"
#include "qwalk/topology.hpp"
#include "qwalk/version.hpp"
#include "qwalk/walk.hpp"

namespace py = pybind11;
using namespace qwalk;

PYBIND11_MODULE(_qwalk, m) {
    m.doc() = "Nonunitary split-step walk toolkit (C++ core)";
    m.attr("__version__") = version;

    py::register_exception<invalid_parameter>(m, "InvalidParameter",
                                              PyExc_ValueError);
    py::register_exception<precondition_error>(m, "PreconditionError",
                                               PyExc_RuntimeError);
    py::register_exception<resolution_error>(m, "ResolutionError",
                                             PyExc_RuntimeError);
    py::register_exception<consistency_error>(m, "ConsistencyError",
                                              PyExc_RuntimeError);

    py::enum_<Boundary>(m, "Boundary")
        .value("pbc", Boundary::pbc)
        .value("fbc", Boundary::fbc);
    py::enum_<Frame>(m, "Frame")
        .value("standard", Frame::standard)
        .value("shifted", Frame::shifted);
    py::enum_<Contour>(m, "Contour")
        .value("bloch", Contour::bloch)
        .value("gbz", Contour::gbz);
    py::enum_<AlphaSector>(m, "AlphaSector")
        .value("zero", AlphaSector::zero)
        .value("pi", AlphaSector::pi);
    py::enum_<SpectrumSource>(m, "SpectrumSource")
        .value("full_matrix", SpectrumSource::full_matrix)
        .value("bloch_sampled", SpectrumSource::bloch_sampled);

    py::class_<WalkParams>(m, "WalkParams")
        .def(py::init<double, double, double, int, Boundary>(),
             py::arg("theta1"), py::arg("theta2"), py::arg("gamma") = 0.0,
             py::arg("n_sites") = 60, py::arg("boundary") = Boundary::fbc)
        .def_readwrite("theta1", &WalkParams::theta1)
        .def_readwrite("theta2", &WalkParams::theta2)
        .def_readwrite("gamma", &WalkParams::gamma)
        .def_readwrite("n_sites", &WalkParams::n_sites)
        .def_readwrite("boundary", &WalkParams::boundary)
        .def("validate", &WalkParams::validate);

    py::class_<SymmetryReport>(m, "SymmetryReport")
        .def_readonly("sublattice", &SymmetryReport::sublattice)
        .def_readonly("time_reversal", &SymmetryReport::time_reversal)
        .def_readonly("particle_hole", &SymmetryReport::particle_hole);

    py::class_<QuasienergySpectrum>(m, "QuasienergySpectrum")
        .def_readonly("params", &QuasienergySpectrum::params)
        .def_readonly("energies", &QuasienergySpectrum::energies)
        .def_readonly("modes", &QuasienergySpectrum::modes)
        .def_readonly("source", &QuasienergySpectrum::source)
        .def_readonly("momenta", &QuasienergySpectrum::momenta);

    py::class_<LoopClassification>(m, "LoopClassification")
        .def_readonly("winding_about_zero", &LoopClassification::winding_about_zero)
        .def_readonly("winding_about_pi", &LoopClassification::winding_about_pi)
        .def_readonly("inside_zero", &LoopClassification::inside_zero)
        .def_readonly("inside_pi", &LoopClassification::inside_pi);

    py::class_<SkinReport>(m, "SkinReport")
        .def_readonly("mean_positions", &SkinReport::mean_positions)
        .def_readonly("fraction_right", &SkinReport::fraction_right)
        .def_readonly("ipr", &SkinReport::ipr);

    py::class_<BerryPhaseResult>(m, "BerryPhaseResult")
        .def_readonly("phase_plus", &BerryPhaseResult::phase_plus)
        .def_readonly("phase_minus", &BerryPhaseResult::phase_minus)
        .def_readonly("total", &BerryPhaseResult::total)
        .def_readonly("n_k", &BerryPhaseResult::n_k);

    py::class_<InvariantPair>(m, "InvariantPair")
        .def_readonly("nu0", &InvariantPair::nu0)
        .def_readonly("nupi", &InvariantPair::nupi)
        .def_readonly("nu", &InvariantPair::nu)
        .def_readonly("nu_prime", &InvariantPair::nu_prime)
        .def_readonly("nu_raw", &InvariantPair::nu_raw)
        .def_readonly("nu_prime_raw", &InvariantPair::nu_prime_raw)
        .def_readonly("contour", &InvariantPair::contour);

    py::class_<LocalizationConstants>(m, "LocalizationConstants")
        .def_readonly("r1", &LocalizationConstants::r1)
        .def_readonly("r2", &LocalizationConstants::r2)
        .def_readonly("z0", &LocalizationConstants::z0)
        .def_readonly("zpi", &LocalizationConstants::zpi);

    py::class_<InverseLocalization>(m, "InverseLocalization")
        .def_readonly("t", &InverseLocalization::t)
        .def_readonly("t_tilde", &InverseLocalization::t_tilde);

    py::class_<BoundarySet>(m, "BoundarySet")
        .def_readonly("zero", &BoundarySet::zero)
        .def_readonly("pi", &BoundarySet::pi);

    py::class_<EdgeModeAnalytic>(m, "EdgeModeAnalytic")
        .def_readonly("alpha", &EdgeModeAnalytic::alpha)
        .def_readonly("eta", &EdgeModeAnalytic::eta)
        .def_readonly("amplitudes_odd", &EdgeModeAnalytic::amplitudes_odd)
        .def_readonly("amplitudes_even", &EdgeModeAnalytic::amplitudes_even)
        .def_readonly("t_tilde", &EdgeModeAnalytic::t_tilde)
        .def_readonly("n_sites", &EdgeModeAnalytic::n_sites)
        .def("materialize", &EdgeModeAnalytic::materialize);

    py::class_<FidelityReport>(m, "FidelityReport")
        .def_readonly("fidelity", &FidelityReport::fidelity)
        .def_readonly("eigen_residual", &FidelityReport::eigen_residual)
        .def_readonly("sublattice_residual", &FidelityReport::sublattice_residual)
        .def_readonly("eigenvalue", &FidelityReport::eigenvalue);

    py::enum_<TransferRegion>(m, "TransferRegion")
        .value("opposite_edges", TransferRegion::opposite_edges)
        .value("zero_transferred", TransferRegion::zero_transferred)
        .value("pi_transferred", TransferRegion::pi_transferred)
        .value("both_transferred", TransferRegion::both_transferred);

    py::class_<TransferClass>(m, "TransferClass")
        .def_readonly("s_zero", &TransferClass::s_zero)
        .def_readonly("s_pi", &TransferClass::s_pi)
        .def_readonly("region", &TransferClass::region)
        .def_readonly("loop_agreement", &TransferClass::loop_agreement)
        .def_readonly("loops", &TransferClass::loops);

    m.def("build_coin", &build_coin, py::arg("theta"), py::arg("n_sites"));
    m.def("build_shift", &build_shift, py::arg("n_sites"), py::arg("boundary"));
    m.def("build_gain_loss", &build_gain_loss, py::arg("gamma"),
          py::arg("n_sites"));
    m.def("build_floquet", &build_floquet, py::arg("params"),
          py::arg("frame") = Frame::standard);
    m.def("bloch_dispersion", &bloch_dispersion, py::arg("params"),
          py::arg("p"), py::arg("deformation") = 0.0);
    m.def("check_symmetries", &check_symmetries, py::arg("floquet"));

    m.def("spectrum_fbc", &spectrum_fbc, py::arg("params"));
    m.def("spectrum_pbc_bloch", &spectrum_pbc_bloch, py::arg("params"),
          py::arg("n_k") = 512);
    m.def("loop_classification", &loop_classification, py::arg("params"),
          py::arg("n_k") = 512);
    m.def("skin_report", &skin_report, py::arg("spectrum"),
          py::arg("bulk_filter") = 0.2);

    m.def(
        "berry_phase",
        [](const WalkParams& p, Frame f, Contour c, int n_k) {
            return berry_phase(p, f, c, n_k);
        },
        py::arg("params"), py::arg("frame"), py::arg("contour"),
        py::arg("n_k") = 512);
    m.def("invariants", &invariants, py::arg("params"), py::arg("contour"),
          py::arg("n_k") = 512);
    m.def("gbz_contour", &gbz_contour, py::arg("gamma"), py::arg("n_k"));

    m.def("coin_reflection", &coin_reflection, py::arg("theta"));
    m.def("localization_constants", &localization_constants, py::arg("theta1"),
          py::arg("theta2"));
    m.def("inverse_localization", &inverse_localization, py::arg("params"),
          py::arg("alpha"), py::arg("eta"));
    m.def("phase_boundaries", &phase_boundaries, py::arg("theta1"));
    m.def("analytic_edge_mode", &analytic_edge_mode, py::arg("params"),
          py::arg("alpha"), py::arg("eta"));
    m.def("verify_against_numeric", &verify_against_numeric, py::arg("params"),
          py::arg("alpha"), py::arg("eta"), py::arg("spectrum"));
    m.def("transfer_classification", &transfer_classification,
          py::arg("params"));
    m.def("transfer_classification_with_loop", &transfer_classification_with_loop,
          py::arg("params"), py::arg("n_k") = 512);
    m.def("transfer_boundaries", &transfer_boundaries, py::arg("gamma"),
          py::arg("theta1"), py::arg("alpha"));
}
