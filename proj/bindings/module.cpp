#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "denseam/diagnostics.hpp"
#include "denseam/emit.hpp"
#include "denseam/harness.hpp"
#include "denseam/oracle.hpp"
#include "denseam/optim.hpp"

namespace py = pybind11;
using namespace denseam;

PYBIND11_MODULE(_denseam, m) {
  m.doc() = "Shallow tied-weight associative memories, their analytic "
            "training updates, and the scaling-theory oracles.";

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &Rng::next_u64)
      .def("next_double", &Rng::next_double)
      .def("next_gaussian", &Rng::next_gaussian)
      .def("split", &Rng::split, py::arg("stream"))
      .def_property_readonly("seed", &Rng::seed)
      .def_property_readonly("position", &Rng::position);

  m.def("gemm", &gemm, py::arg("a"), py::arg("b"), py::arg("transpose_a") = false,
        py::arg("transpose_b") = false);
  m.def("sample_gaussian", &sample_gaussian, py::arg("rng"), py::arg("rows"),
        py::arg("cols"), py::arg("std"));
  m.def("sym_top_eigs", &sym_top_eigs, py::arg("m"), py::arg("k"));

  py::enum_<ActivationType>(m, "ActivationType")
      .value("linear", ActivationType::linear)
      .value("relu_p", ActivationType::relu_p)
      .value("softmax", ActivationType::softmax);

  py::class_<ActivationKind>(m, "ActivationKind")
      .def_static("linear", &ActivationKind::linear)
      .def_static("relu", &ActivationKind::relu, py::arg("p"))
      .def_static("softmax", &ActivationKind::softmax, py::arg("beta") = 1.0)
      .def_readonly("type", &ActivationKind::type)
      .def_readonly("p", &ActivationKind::p)
      .def_readonly("beta", &ActivationKind::beta)
      .def_readonly("norm_const", &ActivationKind::norm_const)
      .def("elementwise", &ActivationKind::elementwise)
      .def("__repr__",
           [](const ActivationKind& a) { return std::string(a.name()); });

  m.def("relu_norm_constant", &relu_norm_constant, py::arg("p"));
  m.def("activation_mean", &activation_mean, py::arg("activation"));
  m.def("softmax_columns", &softmax_columns, py::arg("z"), py::arg("beta") = 1.0);

  py::enum_<InputNonlinearity>(m, "InputNonlinearity")
      .value("tanh", InputNonlinearity::tanh_fn)
      .value("identity", InputNonlinearity::identity);

  py::class_<ModelState>(m, "ModelState")
      .def(py::init<>())
      .def_readwrite("W", &ModelState::W)
      .def_readwrite("b", &ModelState::b)
      .def_readwrite("c", &ModelState::c)
      .def_readwrite("s1", &ModelState::s1)
      .def_readwrite("s2", &ModelState::s2)
      .def_readwrite("centered", &ModelState::centered)
      .def_readwrite("activation", &ModelState::activation)
      .def_readwrite("g", &ModelState::g)
      .def_property_readonly("n", &ModelState::n)
      .def_property_readonly("k", &ModelState::k)
      .def("effective_w", &ModelState::effective_w)
      .def("effective_b", &ModelState::effective_b);

  py::enum_<BiasInit>(m, "BiasInit")
      .value("standard_gaussian", BiasInit::standard_gaussian)
      .value("zero", BiasInit::zero);
  m.def("init_model", &init_model, py::arg("rng"), py::arg("k"), py::arg("n"),
        py::arg("activation"), py::arg("s1"), py::arg("s2"),
        py::arg("centered"),
        py::arg("bias_init") = BiasInit::standard_gaussian);
  m.def("center", py::overload_cast<const Matrix&>(&center), py::arg("m"));
  m.def("center_vector", py::overload_cast<const Vector&>(&center),
        py::arg("v"));

  py::class_<BatchTensors>(m, "BatchTensors")
      .def_readonly("G", &BatchTensors::G)
      .def_readonly("Z", &BatchTensors::Z)
      .def_readonly("S", &BatchTensors::S)
      .def_readonly("Sprime", &BatchTensors::Sprime)
      .def_readonly("F", &BatchTensors::F)
      .def_readonly("R", &BatchTensors::R);

  m.def("forward",
        py::overload_cast<const ModelState&, const Matrix&>(&forward),
        py::arg("model"), py::arg("x"));
  m.def("forward",
        py::overload_cast<const ModelState&, const Matrix&, const Matrix&>(
            &forward),
        py::arg("model"), py::arg("x"), py::arg("y"));
  m.def("mse_loss", &mse_loss, py::arg("f"), py::arg("y"));
  m.def("effective_energy", &effective_energy, py::arg("model"), py::arg("x"));
  m.def("dynamics_step", &dynamics_step, py::arg("model"), py::arg("x"),
        py::arg("dt"));

  py::class_<DynamicsTrace>(m, "DynamicsTrace")
      .def_readonly("states", &DynamicsTrace::states)
      .def_readonly("energies", &DynamicsTrace::energies);
  m.def("run_dynamics", &run_dynamics, py::arg("model"), py::arg("x0"),
        py::arg("dt"), py::arg("steps"));

  py::class_<LearningRates>(m, "LearningRates")
      .def(py::init([](double etaW, double etaB, double etaC) {
             return LearningRates{etaW, etaB, etaC};
           }),
           py::arg("etaW"), py::arg("etaB") = 0.0, py::arg("etaC") = 0.0)
      .def_readwrite("etaW", &LearningRates::etaW)
      .def_readwrite("etaB", &LearningRates::etaB)
      .def_readwrite("etaC", &LearningRates::etaC);

  py::class_<LossGradients>(m, "LossGradients")
      .def_readonly("gradW", &LossGradients::gradW)
      .def_readonly("gradW1", &LossGradients::gradW1)
      .def_readonly("gradW2", &LossGradients::gradW2)
      .def_readonly("gradB", &LossGradients::gradB)
      .def_readonly("gradC", &LossGradients::gradC);
  m.def("loss_gradients", &loss_gradients, py::arg("model"), py::arg("batch"));

  py::class_<UpdateDecomposition>(m, "UpdateDecomposition")
      .def_readonly("dW1", &UpdateDecomposition::dW1)
      .def_readonly("dW2", &UpdateDecomposition::dW2)
      .def_readonly("dZ1", &UpdateDecomposition::dZ1)
      .def_readonly("dZ2", &UpdateDecomposition::dZ2)
      .def_readonly("dF11", &UpdateDecomposition::dF11)
      .def_readonly("dF12", &UpdateDecomposition::dF12)
      .def_readonly("dF21", &UpdateDecomposition::dF21)
      .def_readonly("dF22", &UpdateDecomposition::dF22)
      .def_readonly("dB", &UpdateDecomposition::dB)
      .def_readonly("dC", &UpdateDecomposition::dC);
  m.def("sgd_update_decomposition", &sgd_update_decomposition,
        py::arg("model"), py::arg("batch"), py::arg("lr"));
  m.def("adam_row_mean", &adam_row_mean, py::arg("update"));

  py::class_<AdamState>(m, "AdamState")
      .def_static("zeros_like", &AdamState::zeros_like, py::arg("model"))
      .def_readwrite("beta1", &AdamState::beta1)
      .def_readwrite("beta2", &AdamState::beta2)
      .def_readwrite("eps", &AdamState::eps)
      .def_readonly("t", &AdamState::t);
  py::class_<AdamUpdate>(m, "AdamUpdate")
      .def_readonly("uW", &AdamUpdate::uW)
      .def_readonly("uB", &AdamUpdate::uB)
      .def_readonly("uC", &AdamUpdate::uC);
  m.def("sgd_step", &sgd_step, py::arg("model"), py::arg("grads"),
        py::arg("lr"));
  m.def("adam_step", &adam_step, py::arg("model"), py::arg("grads"),
        py::arg("state"), py::arg("lr"), py::arg("project_update") = false);

  py::class_<Dims>(m, "Dims")
      .def(py::init([](long n, long k, long p, long b) {
             return Dims{n, k, p, b};
           }),
           py::arg("n"), py::arg("k"), py::arg("p"), py::arg("b"))
      .def_readwrite("n", &Dims::n)
      .def_readwrite("k", &Dims::k)
      .def_readwrite("p", &Dims::p)
      .def_readwrite("b", &Dims::b)
      .def_property_readonly("kappa", &Dims::kappa)
      .def_property_readonly("rho", &Dims::rho)
      .def_property_readonly("beta", &Dims::beta)
      .def_property_readonly("rho_b", &Dims::rho_b);

  py::enum_<RegimeKind>(m, "RegimeKind")
      .value("proportional", RegimeKind::proportional)
      .value("k_only", RegimeKind::k_only);
  py::class_<ScalingRegime>(m, "ScalingRegime")
      .def_static("proportional", &ScalingRegime::proportional,
                  py::arg("kappa"), py::arg("rho"), py::arg("beta"))
      .def_static("k_only", &ScalingRegime::k_only, py::arg("n"), py::arg("p"),
                  py::arg("beta"))
      .def_readonly("kind", &ScalingRegime::kind);
  m.def("dims_for", &dims_for, py::arg("regime"), py::arg("scale"));

  py::enum_<OptimizerKind>(m, "OptimizerKind")
      .value("sgd", OptimizerKind::sgd)
      .value("adam", OptimizerKind::adam);

  py::class_<ScalingRule>(m, "ScalingRule")
      .def_readonly("s1_exp_n", &ScalingRule::s1_exp_n)
      .def_readonly("s1_exp_k", &ScalingRule::s1_exp_k)
      .def_readonly("s2_exp_n", &ScalingRule::s2_exp_n)
      .def_readonly("s2_exp_k", &ScalingRule::s2_exp_k)
      .def_readonly("etaw_exp_k", &ScalingRule::etaw_exp_k)
      .def_readonly("provenance", &ScalingRule::provenance);
  m.def("scaling_rule", &scaling_rule, py::arg("regime"), py::arg("activation"),
        py::arg("optimizer"), py::arg("softmax_sgd_override") = false);

  py::class_<Prescription>(m, "Prescription")
      .def_readonly("s1", &Prescription::s1)
      .def_readonly("s2", &Prescription::s2)
      .def_readonly("etaW", &Prescription::etaW)
      .def_readonly("etaB", &Prescription::etaB)
      .def_readonly("etaC", &Prescription::etaC)
      .def_readonly("provenance", &Prescription::provenance);
  m.def("prescription", &prescription, py::arg("regime"), py::arg("activation"),
        py::arg("optimizer"), py::arg("dims"), py::arg("eta0"),
        py::arg("eta_b0") = std::numeric_limits<double>::quiet_NaN(),
        py::arg("eta_c0") = std::numeric_limits<double>::quiet_NaN(),
        py::arg("softmax_sgd_override") = false, py::arg("s10") = 1.0,
        py::arg("s20") = 1.0);

  py::enum_<DataKind>(m, "DataKind")
      .value("isotropic", DataKind::isotropic)
      .value("anisotropic_power_law", DataKind::anisotropic_power_law)
      .value("mnist_plaquette", DataKind::mnist_plaquette);
  py::class_<DataSpec>(m, "DataSpec")
      .def(py::init<>())
      .def_readwrite("kind", &DataSpec::kind)
      .def_readwrite("noise_std", &DataSpec::noise_std)
      .def_readwrite("exponent", &DataSpec::exponent)
      .def_readwrite("block", &DataSpec::block)
      .def_readwrite("mnist_dir", &DataSpec::mnist_dir);
  py::class_<Dataset>(m, "Dataset")
      .def_readonly("x", &Dataset::x)
      .def_readonly("covariance_diag", &Dataset::covariance_diag);
  m.def("generate", &generate, py::arg("spec"), py::arg("dims"), py::arg("rng"));
  m.def(
      "noisy_batch",
      [](const Dataset& data, const std::vector<long>& idx, double noise_std,
         Rng& rng) { return noisy_batch(data, idx, noise_std, rng); },
      py::arg("data"), py::arg("indices"), py::arg("noise_std"), py::arg("rng"));
  m.def("plaquette_downsample", &plaquette_downsample, py::arg("image"),
        py::arg("block"));
  m.def("project_weights", &project_weights, py::arg("w_row"), py::arg("block"));
  m.def("plaquette_dim", &plaquette_dim, py::arg("block"));

  m.def("gram_spike_bulk", &gram_spike_bulk, py::arg("s"));
  m.def("participation_ratio", &participation_ratio, py::arg("sigma"));
  m.def("participation_ratio_centered", &participation_ratio_centered,
        py::arg("sigma"));

  m.def("expected_trace_wtw_squared", &expected_trace_wtw_squared, py::arg("k"),
        py::arg("n"));
  m.def("init_output_variance_linear", &init_output_variance_linear,
        py::arg("dims"), py::arg("s1"), py::arg("s2"), py::arg("v_g"));
  m.def("wishart_trace_cubed", &wishart_trace_cubed, py::arg("t1"),
        py::arg("t2"), py::arg("t3"), py::arg("k"));
  py::class_<MpMoments>(m, "MpMoments")
      .def_readonly("m1", &MpMoments::m1)
      .def_readonly("m2", &MpMoments::m2)
      .def_readonly("m3", &MpMoments::m3)
      .def_readonly("m4", &MpMoments::m4);
  m.def("mp_moments", &mp_moments, py::arg("rho_b"));
  m.def("predicted_spike", &predicted_spike, py::arg("activation"),
        py::arg("k"), py::arg("b"));
  m.def("measure_vg", &measure_vg, py::arg("samples"), py::arg("rng"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
