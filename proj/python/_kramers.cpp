// Python bindings: thin wrappers returning plain Python / NumPy values.

#include "kramers/box1d.hpp"
#include "kramers/dressed_potential.hpp"
#include "kramers/dscale.hpp"
#include "kramers/scf.hpp"
#include "kramers/sweep.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

namespace py = pybind11;
using namespace kramers;

namespace {

using Params = std::map<std::string, std::string>;

FieldParams field_of(double alpha0, double omega, double x_amp_coeff) {
  FieldParams p;
  p.alpha0 = alpha0;
  p.omega = omega;
  p.x_amp_coeff = x_amp_coeff;
  p.validate();
  return p;
}

DressedPotential make_potential(double Z, double alpha0, double omega, const std::string& trajectory,
                                const Params& trajectory_params, double x_amp_coeff, double softening) {
  PotentialOptions o;
  o.softening = softening;
  return DressedPotential(Z, trajectory_from_config(trajectory, trajectory_params), field_of(alpha0, omega, x_amp_coeff),
                          o);
}

Eigen::MatrixXd rows(const std::vector<Vec3>& v) {
  Eigen::MatrixXd m(v.size(), 3);
  for (std::size_t i = 0; i < v.size(); ++i) m.row(i) = v[i].transpose();
  return m;
}

dscale::ElectronConfiguration config_of(const Eigen::MatrixXd& positions) {
  if (positions.cols() != 3) throw Error("positions must have shape (N, 3)");
  dscale::ElectronConfiguration c;
  for (Eigen::Index i = 0; i < positions.rows(); ++i) c.positions.emplace_back(positions.row(i).transpose());
  return c;
}

py::dict point_dict(const SweepPoint& p) {
  py::dict d;
  d["hamiltonian"] = dscale::hamiltonian_name(p.hamiltonian);
  d["alpha0"] = p.alpha0;
  d["N"] = p.N;
  d["energy"] = p.energy;
  d["raw_energy"] = p.raw_energy;
  d["binding_energy"] = p.binding_energy;
  d["localized_energy"] = p.localized_energy;
  d["n_bound"] = p.n_bound;
  d["converged"] = p.converged;
  d["failed"] = p.failed;
  d["error"] = p.error;
  d["positions"] = rows(p.positions);
  return d;
}

}  // namespace

PYBIND11_MODULE(_kramers, m) {
  m.doc() = "Laser-dressed Coulomb potentials, D-scaled ground states and floating-Gaussian SCF.";
  m.attr("__version__") = KRAMERS_VERSION;
  m.attr("FINE_STRUCTURE") = kFineStructure;

  py::register_exception<Error>(m, "KramersError", PyExc_RuntimeError);

  m.def("mass_factor", [](double alpha0, double omega) { return mass_factor(field_of(alpha0, omega, 1.0)); },
        py::arg("alpha0"), py::arg("omega") = 1.0, "Relativistic mass multiplier (1 + 2q)^(1/2).");

  m.def(
      "trajectory",
      [](double alpha0, double phase, const std::string& kind, const Params& params, double omega, double x_amp_coeff) {
        return Vec3(eval_trajectory(trajectory_from_config(kind, params), field_of(alpha0, omega, x_amp_coeff), phase));
      },
      py::arg("alpha0"), py::arg("phase"), py::arg("kind") = "rel", py::arg("params") = Params{},
      py::arg("omega") = 1.0, py::arg("x_amp_coeff") = 1.0, "Quiver displacement alpha(phase).");

  py::class_<DressedPotential>(m, "Potential")
      .def(py::init(&make_potential), py::arg("Z") = 1.0, py::arg("alpha0") = 0.0, py::arg("omega") = 1.0,
           py::arg("trajectory") = "rel", py::arg("trajectory_params") = Params{}, py::arg("x_amp_coeff") = 1.0,
           py::arg("softening") = 0.0)
      .def("__call__", [](const DressedPotential& p, const Vec3& r) { return p.value(r); }, py::arg("r"))
      .def("value_and_gradient", &DressedPotential::value_and_gradient, py::arg("r"))
      .def(
          "grid",
          [](const DressedPotential& p, double x_min, double x_max, double z_min, double z_max, int nx, int nz,
             int jobs) {
            const auto g = potential_grid(p, x_min, x_max, z_min, z_max, nx, nz, jobs);
            py::array_t<double> out({g.nz, g.nx});
            std::copy(g.values.begin(), g.values.end(), out.mutable_data());
            return out;
          },
          py::arg("x_min"), py::arg("x_max"), py::arg("z_min"), py::arg("z_max"), py::arg("nx"), py::arg("nz"),
          py::arg("jobs") = 1, "Values on the y = 0 plane, shape (nz, nx).")
      .def_property_readonly("Z", &DressedPotential::charge)
      .def_property_readonly("alpha0", [](const DressedPotential& p) { return p.params().alpha0; })
      .def_property_readonly("mass_factor", [](const DressedPotential& p) { return mass_factor(p.params()); })
      .def_property_readonly("trajectory", [](const DressedPotential& p) { return kind_name(p.kind()); });

  m.def(
      "box_effective",
      [](const std::vector<double>& z, double alpha0, const std::string& method) {
        std::vector<double> out;
        out.reserve(z.size());
        for (double zi : z) {
          if (method == "analytic")
            out.push_back(box1d::effective_analytic(zi, alpha0));
          else if (method == "numeric")
            out.push_back(box1d::effective_numeric(zi, alpha0));
          else if (method == "relativistic")
            out.push_back(box1d::effective_relativistic(zi, alpha0));
          else
            throw Error("unknown method '" + method + "'");
        }
        return out;
      },
      py::arg("z"), py::arg("alpha0"), py::arg("method") = "analytic",
      "Period-averaged square-well potential: analytic, numeric or relativistic.");

  m.def(
      "energy",
      [](const std::string& hamiltonian, const Eigen::MatrixXd& positions, const DressedPotential& pot, double mass) {
        return dscale::energy(dscale::parse_hamiltonian(hamiltonian), config_of(positions), pot, mass);
      },
      py::arg("hamiltonian"), py::arg("positions"), py::arg("potential"), py::arg("mass") = 1.0);

  m.def(
      "gradient",
      [](const std::string& hamiltonian, const Eigen::MatrixXd& positions, const DressedPotential& pot, double mass) {
        Eigen::VectorXd g = dscale::gradient(dscale::parse_hamiltonian(hamiltonian), config_of(positions), pot, mass);
        return Eigen::MatrixXd(g.reshaped<Eigen::RowMajor>(positions.rows(), 3));
      },
      py::arg("hamiltonian"), py::arg("positions"), py::arg("potential"), py::arg("mass") = 1.0);

  m.def(
      "minimize",
      [](const DressedPotential& pot, int N, const std::string& hamiltonian, bool mass_gauge, int restarts,
         std::uint64_t seed, int jobs) {
        dscale::MinimizeOptions o;
        o.restarts = restarts;
        o.seed = seed;
        o.jobs = jobs;
        const double m = mass_gauge ? mass_factor(pot.params()) : 1.0;
        dscale::GroundState gs;
        {
          py::gil_scoped_release release;
          gs = dscale::minimize(dscale::parse_hamiltonian(hamiltonian), N, pot, m, o);
        }
        py::dict d;
        d["energy"] = gs.energy;
        d["positions"] = rows(gs.config.positions);
        d["n_bound"] = gs.n_bound;
        d["converged"] = gs.converged;
        d["grad_norm"] = gs.grad_norm;
        d["localized_energy"] = gs.localized_energy;
        d["localized_positions"] = rows(gs.localized_config.positions);
        return d;
      },
      py::arg("potential"), py::arg("N"), py::arg("hamiltonian") = "planar", py::arg("mass_gauge") = true,
      py::arg("restarts") = 24, py::arg("seed") = 0, py::arg("jobs") = 1,
      "Multistart minimum of a D-scaled energy with N electrons.");

  m.def(
      "sweep",
      [](double Z, int n_max, const std::vector<double>& alpha0, const std::vector<std::string>& hamiltonians,
         const std::string& trajectory, bool mass_gauge, int restarts, std::uint64_t seed, int jobs,
         const std::string& out_dir) {
        SweepSpec s;
        s.Z = Z;
        s.n_max = n_max;
        s.alpha0 = alpha0;
        s.hamiltonians.clear();
        for (const auto& h : hamiltonians) s.hamiltonians.push_back(dscale::parse_hamiltonian(h));
        s.kind = trajectory_from_config(trajectory, {});
        s.mass_gauge = mass_gauge;
        s.restarts = restarts;
        s.seed = seed;
        s.jobs = jobs;
        s.out_dir = out_dir;
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = run_sweep(s);
        }
        py::list points;
        for (const auto& p : r.points) points.append(point_dict(p));
        return points;
      },
      py::arg("Z"), py::arg("n_max"), py::arg("alpha0"), py::arg("hamiltonians") = std::vector<std::string>{"planar"},
      py::arg("trajectory") = "rel", py::arg("mass_gauge") = true, py::arg("restarts") = 24, py::arg("seed") = 0,
      py::arg("jobs") = 1, py::arg("out_dir") = "",
      "Ground states for N = 1..n_max over an alpha0 grid; one dict per point.");

  m.def(
      "scf",
      [](const DressedPotential& pot, int n_alpha, int n_beta, bool mass_gauge) {
        const auto basis = scf::default_basis(pot);
        scf::ScfState st;
        {
          py::gil_scoped_release release;
          st = scf::scf_solve(basis, pot, n_alpha, n_beta, mass_gauge ? mass_factor(pot.params()) : 1.0);
        }
        py::dict d;
        d["energy"] = st.energy;
        d["converged"] = st.converged;
        d["iterations"] = st.iterations;
        d["populations"] = scf::mulliken(st, basis);
        d["centers"] = rows(basis.centers);
        d["energy_trace"] = st.energy_trace;
        return d;
      },
      py::arg("potential"), py::arg("n_alpha"), py::arg("n_beta"), py::arg("mass_gauge") = true,
      "Unrestricted Hartree-Fock in the default floating basis.");
}
