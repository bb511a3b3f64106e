#include "kramers/box1d.hpp"
#include "kramers/dressed_potential.hpp"
#include "kramers/dscale.hpp"
#include "kramers/io.hpp"
#include "kramers/scf.hpp"
#include "kramers/sweep.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace kramers;
using io::Json;

// Usage problems exit 2, numerical failures exit 1.
struct UsageError : Error {
  using Error::Error;
};

class Options {
 public:
  explicit Options(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double num(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const double x = std::stod(it->second, &used);
      if (used == it->second.size()) return x;
    } catch (const std::exception&) {
    }
    throw UsageError("--" + key + ": expected a number, got '" + it->second + "'");
  }

  int integer(const std::string& key, int fallback) const {
    const double x = num(key, fallback);
    if (x != std::floor(x)) throw UsageError("--" + key + ": expected an integer");
    return static_cast<int>(x);
  }

  bool on_off(const std::string& key, bool fallback) const {
    const std::string v = str(key, fallback ? "on" : "off");
    if (v != "on" && v != "off") throw UsageError("--" + key + " must be on or off");
    return v == "on";
  }

  std::string choice(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& allowed) const {
    const std::string v = str(key, fallback);
    for (const auto& a : allowed)
      if (v == a) return v;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    throw UsageError("--" + key + " must be one of " + list);
  }

 private:
  std::map<std::string, std::string> values_;
};

// Registers string-valued flags on a subcommand and merges the ones given
// on the command line over the config file entries.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  FlagSet& add(const std::string& key, const std::string& help) {
    auto& slot = storage_[key];
    flags_.emplace_back(key, app_->add_option("--" + key, slot, help));
    return *this;
  }

  Options merge(const std::map<std::string, std::string>& config) const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : config)
      if (storage_.count(k)) out[k] = v;
    for (const auto& [k, opt] : flags_)
      if (opt->count() > 0) out[k] = storage_.at(k);
    return Options(std::move(out));
  }

 private:
  CLI::App* app_;
  std::map<std::string, std::string> storage_;
  std::vector<std::pair<std::string, CLI::Option*>> flags_;
};

void add_field_flags(FlagSet& f) {
  f.add("z", "nuclear charge Z")
      .add("alpha0", "quiver amplitude, bohr")
      .add("omega", "laser angular frequency, a.u.")
      .add("trajectory", "nonrel|rel|elliptical|circular|multicolor")
      .add("x-amp-coeff", "figure-8 transverse amplitude coefficient")
      .add("eps1", "elliptical electric amplitude 1")
      .add("eps2", "elliptical electric amplitude 2")
      .add("beta1", "elliptical magnetic amplitude 1")
      .add("beta2", "elliptical magnetic amplitude 2")
      .add("eps", "circular electric amplitude")
      .add("beta", "circular magnetic amplitude")
      .add("tones", "multicolor tones amp:axis:harmonic:cos|sin;...");
}

TrajectoryKind kind_from(const Options& o) {
  try {
    return trajectory_from_config(o.str("trajectory", "rel"), o.values());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

FieldParams field_from(const Options& o) {
  FieldParams p;
  p.alpha0 = o.num("alpha0", 0.0);
  p.omega = o.num("omega", 1.0);
  p.x_amp_coeff = o.num("x-amp-coeff", 1.0);
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return p;
}

void emit(const Options& o, const std::string& text) {
  if (o.has("out")) {
    io::write_text(o.str("out", ""), text);
  } else {
    std::cout << text;
    std::cout.flush();
  }
}

std::string header(const FieldParams& p, const TrajectoryKind& kind, double Z) {
  std::ostringstream out;
  out << "# alpha0=" << io::fmt(p.alpha0) << " omega=" << io::fmt(p.omega) << " kind=" << kind_name(kind)
      << " Z=" << io::fmt(Z) << "\n";
  return out.str();
}

Json positions_json(const std::vector<Vec3>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(io::vec3(p));
  return a;
}

int run_potential_grid(const Options& o) {
  const double Z = o.num("z", 1.0);
  const auto kind = kind_from(o);
  const auto params = field_from(o);
  PotentialOptions popt;
  popt.softening = o.num("softening", 0.0);
  popt.n_phase = o.integer("n-phase", 512);
  const std::string format = o.choice("format", "csv", {"csv", "json"});
  const DressedPotential pot(Z, kind, params, popt);
  const Extent ext = pot.extent();
  const double x_max = o.num("x-max", ext.x + 5.0), x_min = o.num("x-min", -x_max);
  const double z_max = o.num("z-max", ext.z + 5.0), z_min = o.num("z-min", -z_max);
  const int nx = o.integer("nx", 101), nz = o.integer("nz", 101);
  if (nx < 2 || nz < 2) throw UsageError("--nx and --nz must be >= 2");
  if (!(x_max > x_min) || !(z_max > z_min)) throw UsageError("grid ranges must be increasing");

  const auto grid = potential_grid(pot, x_min, x_max, z_min, z_max, nx, nz, o.integer("jobs", 1));
  const auto minima = grid_local_minima(grid);
  if (format == "csv") {
    std::ostringstream out;
    out << header(params, kind, Z) << "# local_minima=" << minima.size() << "\nx,z,V\n";
    for (int iz = 0; iz < nz; ++iz)
      for (int ix = 0; ix < nx; ++ix)
        out << io::fmt(grid.x(ix)) << "," << io::fmt(grid.z(iz)) << "," << io::fmt(grid.at(ix, iz)) << "\n";
    emit(o, out.str());
  } else {
    Json j{{"alpha0", io::number(params.alpha0)}, {"omega", io::number(params.omega)},
           {"kind", kind_name(kind)},           {"Z", io::number(Z)},
           {"x", Json::array()},                {"z", Json::array()},
           {"V", Json::array()},                {"local_minima", Json::array()}};
    for (int ix = 0; ix < nx; ++ix) j["x"].push_back(io::number(grid.x(ix)));
    for (int iz = 0; iz < nz; ++iz) {
      j["z"].push_back(io::number(grid.z(iz)));
      Json row = Json::array();
      for (int ix = 0; ix < nx; ++ix) row.push_back(io::number(grid.at(ix, iz)));
      j["V"].push_back(row);
    }
    for (auto [ix, iz] : minima) j["local_minima"].push_back({io::number(grid.x(ix)), io::number(grid.z(iz))});
    emit(o, j.dump(2) + "\n");
  }
  return 0;
}

int run_box1d(const Options& o) {
  const double a0 = o.num("alpha0", 0.0);
  if (!(a0 >= 0.0)) throw UsageError("--alpha0 must be >= 0");
  const std::string mode = o.choice("mode", "analytic", {"analytic", "numeric", "relativistic", "multicolor"});
  const int n_phase = o.integer("n-phase", 4096);
  if (n_phase < 8) throw UsageError("--n-phase must be >= 8");
  const double z_max = o.num("z-max", a0 + 3.0), z_min = o.num("z-min", -z_max);
  const int nz = o.integer("nz", 401);
  if (nz < 2 || !(z_max > z_min)) throw UsageError("bad z grid");
  std::vector<double> zs(nz);
  for (int i = 0; i < nz; ++i) zs[i] = z_min + (z_max - z_min) * i / (nz - 1);

  std::ostringstream out;
  out << "# alpha0=" << io::fmt(a0) << " mode=" << mode << " n_phase=" << n_phase << "\n";
  if (mode == "multicolor") {
    const double a1 = o.num("alpha1", 0.0);
    const std::string base_name = o.choice("base", "box", {"box", "coulomb"});
    const auto base = base_name == "box" ? box1d::MulticolorBase::Box : box1d::MulticolorBase::Coulomb;
    const double x_max = o.num("x-max", a0 + 3.0), x_min = o.num("x-min", -x_max);
    const int nx = o.integer("nx", 81);
    if (nx < 2 || !(x_max > x_min)) throw UsageError("bad x grid");
    std::vector<double> xs(nx);
    for (int i = 0; i < nx; ++i) xs[i] = x_min + (x_max - x_min) * i / (nx - 1);
    const auto g = box1d::multicolor_effective(zs, xs, a0, a1, n_phase, base, o.num("z", 1.0));
    out << "# alpha1=" << io::fmt(a1) << " base=" << base_name << "\nx,z,V_eff\n";
    for (std::size_t iz = 0; iz < zs.size(); ++iz)
      for (std::size_t ix = 0; ix < xs.size(); ++ix)
        out << io::fmt(xs[ix]) << "," << io::fmt(zs[iz]) << "," << io::fmt(g.at(ix, iz)) << "\n";
  } else {
    std::vector<double> v(nz);
    for (int i = 0; i < nz; ++i) {
      if (mode == "analytic") v[i] = box1d::effective_analytic(zs[i], a0);
      else if (mode == "numeric") v[i] = box1d::effective_numeric(zs[i], a0, n_phase);
      else v[i] = box1d::effective_relativistic(zs[i], a0, kFineStructure, n_phase);
    }
    out << "# local_maxima=" << box1d::count_local_maxima(v) << " local_minima=" << box1d::count_local_minima(v)
        << "\nz,V_eff\n";
    for (int i = 0; i < nz; ++i) out << io::fmt(zs[i]) << "," << io::fmt(v[i]) << "\n";
  }
  emit(o, out.str());
  return 0;
}

dscale::Hamiltonian hamiltonian_from(const Options& o) {
  try {
    return dscale::parse_hamiltonian(o.str("hamiltonian", "planar"));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

int run_dscale_min(const Options& o) {
  const double Z = o.num("z", 1.0);
  const int N = o.integer("n", 1);
  if (!(Z > 0.0)) throw UsageError("--z must be positive");
  if (N < 1) throw UsageError("--n must be >= 1");
  const auto kind = kind_from(o);
  const auto params = field_from(o);
  const auto h = hamiltonian_from(o);
  const bool gauge = o.on_off("mass-gauge", true);
  dscale::MinimizeOptions mo;
  mo.restarts = o.integer("restarts", 24);
  mo.seed = static_cast<std::uint64_t>(o.num("seed", 0.0));
  mo.jobs = o.integer("jobs", 1);
  mo.drop_unbound = o.on_off("drop-unbound", true);
  if (mo.restarts < 1) throw UsageError("--restarts must be >= 1");
  o.choice("format", "json", {"json"});

  const DressedPotential pot(Z, kind, params);
  const double mass = gauge ? mass_factor(params) : 1.0;
  const auto gs = dscale::minimize(h, N, pot, mass, mo);
  Json j{{"kind", kind_name(kind)},
         {"hamiltonian", dscale::hamiltonian_name(h)},
         {"Z", io::number(Z)},
         {"N", N},
         {"alpha0", io::number(params.alpha0)},
         {"omega", io::number(params.omega)},
         {"mass", io::number(mass)},
         {"energy", io::number(gs.energy)},
         {"energy_ev", io::number(gs.energy * kHartreeToEv)},
         {"n_bound", gs.n_bound},
         {"positions", positions_json(gs.config.positions)},
         {"localized_energy", io::number(gs.localized_energy)},
         {"localized_positions", positions_json(gs.localized_config.positions)},
         {"converged", gs.converged},
         {"grad_norm", io::number(gs.grad_norm)},
         {"restarts", gs.n_restarts_used},
         {"seed", mo.seed}};
  emit(o, j.dump(2) + "\n");
  return gs.converged ? 0 : 1;
}

int run_scf(const Options& o) {
  const double Z = o.num("z", 1.0);
  const int N = o.integer("n", 1);
  if (!(Z > 0.0)) throw UsageError("--z must be positive");
  if (N < 1) throw UsageError("--n must be >= 1");
  const auto kind = kind_from(o);
  const auto params = field_from(o);
  const bool gauge = o.on_off("mass-gauge", true);
  scf::ScfOptions so;
  so.damping = o.num("damping", so.damping);
  so.level_shift = o.num("level-shift", so.level_shift);
  so.max_iterations = o.integer("max-iterations", so.max_iterations);
  so.route = o.choice("route", "phase", {"phase", "cubature"}) == "phase" ? scf::NuclearRoute::PhaseBoys
                                                                         : scf::NuclearRoute::Cubature;
  so.cubature.rel_tol = o.num("cubature-tol", so.cubature.rel_tol);
  so.cubature.jobs = o.integer("jobs", 1);
  if (!(so.cubature.rel_tol > 0.0)) throw UsageError("--cubature-tol must be positive");
  o.choice("format", "json", {"json"});

  const DressedPotential pot(Z, kind, params);
  scf::FloatingBasis basis;
  try {
    basis = o.has("basis") ? io::parse_basis(io::read_text(o.str("basis", ""))) : scf::default_basis(pot);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const double mass = gauge ? mass_factor(params) : 1.0;
  const auto [na, nb] = spin_split(N);
  const auto st = scf::scf_solve(basis, pot, na, nb, mass, so);

  Json eps_a = Json::array(), eps_b = Json::array(), pops = Json::array(), centers = Json::array();
  for (Eigen::Index i = 0; i < st.eps_a.size(); ++i) eps_a.push_back(io::number(st.eps_a[i]));
  for (Eigen::Index i = 0; i < st.eps_b.size(); ++i) eps_b.push_back(io::number(st.eps_b[i]));
  for (double p : scf::mulliken(st, basis)) pops.push_back(io::number(p));
  for (const auto& c : basis.centers) centers.push_back(io::vec3(c));
  Json j{{"kind", kind_name(kind)},
         {"Z", io::number(Z)},
         {"N", N},
         {"alpha0", io::number(params.alpha0)},
         {"omega", io::number(params.omega)},
         {"mass", io::number(mass)},
         {"energy", io::number(st.energy)},
         {"energy_ev", io::number(st.energy * kHartreeToEv)},
         {"orbital_energies", {{"alpha", eps_a}, {"beta", eps_b}}},
         {"centers", centers},
         {"populations", pops},
         {"iterations", st.iterations},
         {"kept_functions", st.kept_functions},
         {"spin_broken", st.spin_broken}};
  emit(o, j.dump(2) + "\n");

  if (o.has("density-out")) {
    const Extent ext = pot.extent();
    const double x_max = ext.x + 5.0, z_max = ext.z + 5.0;
    const int nx = o.integer("nx", 81), nz = o.integer("nz", 81);
    const auto g = scf::density_grid(st, basis, o.num("y0", 0.0), -x_max, x_max, -z_max, z_max, nx, nz);
    std::ostringstream out;
    out << header(params, kind, Z) << "# y0=" << io::fmt(g.y0) << "\nx,z,rho\n";
    for (int iz = 0; iz < nz; ++iz)
      for (int ix = 0; ix < nx; ++ix)
        out << io::fmt(g.x(ix)) << "," << io::fmt(g.z(iz)) << "," << io::fmt(g.at(ix, iz)) << "\n";
    io::write_text(o.str("density-out", ""), out.str());
  }
  return 0;
}

SweepSpec spec_from(const Options& o) {
  std::map<std::string, std::string> cfg = o.values();
  cfg.erase("format");
  SweepSpec s;
  s.alpha0 = make_grid(2.0, 40.0, 2.0);
  try {
    s = spec_from_config(cfg, s);
    s.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return s;
}

int run_sweep_cmd(const Options& o) {
  const SweepSpec spec = spec_from(o);
  const auto format = o.choice("format", "csv", {"csv", "json"}) == "csv" ? CurveFormat::Csv : CurveFormat::Json;
  std::mutex mutex;
  const auto result = run_sweep(spec, [&](const SweepPoint& p) {
    std::lock_guard lock(mutex);
    std::cerr << dscale::hamiltonian_name(p.hamiltonian) << " N=" << p.N << " alpha0=" << io::fmt(p.alpha0)
              << (p.failed ? " FAILED: " + p.error : " E=" + io::fmt(p.raw_energy)) << "\n";
  });
  if (!spec.out_dir.empty()) {
    emit_curves(result, spec.out_dir, format);
  } else if (format == CurveFormat::Csv) {
    for (auto h : spec.hamiltonians) std::cout << curves_csv(result, h);
  } else {
    std::cout << sweep_results_json(result).dump(2) << "\n";
  }
  if (result.any_failed()) {
    std::cerr << "kramers: sweep finished with failed points\n";
    return 1;
  }
  return 0;
}

int run_compare(const Options& o) {
  SweepSpec spec = spec_from(o);
  if (spec.hamiltonians.size() != 1) throw UsageError("compare takes a single --hamiltonian");
  const int N = spec.n_max;
  if (N < 2) throw UsageError("compare needs --n >= 2");
  const auto format = o.choice("format", "csv", {"csv", "json"});
  const auto h = spec.hamiltonians.front();
  const auto dres = run_sweep(spec);
  const auto scf_pts = scf_curve(spec.Z, N, spec.alpha0, spec.kind, spec.mass_gauge, spec.omega, spec.x_amp_coeff,
                                 {}, spec.jobs);
  std::vector<double> scf_be;
  bool failed = dres.any_failed();
  for (const auto& p : scf_pts) {
    scf_be.push_back(p.binding_energy);
    failed = failed || p.failed;
  }
  const auto cmp = compare_curves(spec.alpha0, dres.binding_curve(h, N), scf_be);
  const auto dscale_be = dres.binding_curve(h, N);

  std::string text;
  if (format == "csv") {
    std::ostringstream out;
    out << "# Z=" << io::fmt(spec.Z) << " N=" << N << " kind=" << kind_name(spec.kind)
        << " hamiltonian=" << dscale::hamiltonian_name(h) << "\nalpha0,BE_dscale,BE_scf,BEnorm_dscale,BEnorm_scf\n";
    for (std::size_t i = 0; i < spec.alpha0.size(); ++i)
      out << io::fmt(spec.alpha0[i]) << "," << io::fmt(dscale_be[i]) << "," << io::fmt(scf_be[i]) << ","
          << io::fmt(cmp.dscale_norm[i]) << "," << io::fmt(cmp.scf_norm[i]) << "\n";
    text = out.str();
  } else {
    Json j{{"Z", io::number(spec.Z)}, {"N", N}, {"alpha0", Json::array()}, {"BE_dscale", Json::array()},
           {"BE_scf", Json::array()}, {"BEnorm_dscale", Json::array()}, {"BEnorm_scf", Json::array()}};
    for (std::size_t i = 0; i < spec.alpha0.size(); ++i) {
      j["alpha0"].push_back(io::number(spec.alpha0[i]));
      j["BE_dscale"].push_back(io::number(dscale_be[i]));
      j["BE_scf"].push_back(io::number(scf_be[i]));
      j["BEnorm_dscale"].push_back(io::number(cmp.dscale_norm[i]));
      j["BEnorm_scf"].push_back(io::number(cmp.scf_norm[i]));
    }
    j["dscale_argmin"] = cmp.dscale_argmin;
    j["scf_argmin"] = cmp.scf_argmin;
    j["shared_argmin"] = cmp.shared_argmin;
    text = j.dump(2) + "\n";
  }
  if (spec.out_dir.empty()) {
    std::cout << text;
  } else {
    std::filesystem::create_directories(spec.out_dir);
    io::write_text(spec.out_dir / (format == "csv" ? "compare.csv" : "compare.json"), text);
  }
  auto at = [&](int i) { return i < 0 ? std::string("none") : io::fmt(spec.alpha0[i]); };
  std::cerr << "argmin dscale=" << at(cmp.dscale_argmin) << " scf=" << at(cmp.scf_argmin)
            << (cmp.shared_argmin ? " shared" : " differ") << "\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laser-dressed atomic ions: dressed potentials, D-scaling and SCF"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KRAMERS_VERSION);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags override it")->check(CLI::ExistingFile);
  app.fallthrough();

  auto* grid_cmd = app.add_subcommand("potential-grid", "dressed potential on the y = 0 plane");
  FlagSet grid_flags(grid_cmd);
  add_field_flags(grid_flags);
  grid_flags.add("softening", "soft-core eps, bohr")
      .add("n-phase", "base phase nodes")
      .add("x-min", "")
      .add("x-max", "")
      .add("z-min", "")
      .add("z-max", "")
      .add("nx", "")
      .add("nz", "")
      .add("jobs", "worker threads")
      .add("out", "output file (stdout when absent)")
      .add("format", "csv|json");

  auto* box_cmd = app.add_subcommand("box1d", "phase-averaged box potential");
  FlagSet box_flags(box_cmd);
  box_flags.add("alpha0", "quiver amplitude")
      .add("alpha1", "second-colour amplitude (multicolor)")
      .add("mode", "analytic|numeric|relativistic|multicolor")
      .add("base", "box|coulomb (multicolor)")
      .add("z", "nuclear charge (coulomb base)")
      .add("n-phase", "phase nodes")
      .add("z-min", "")
      .add("z-max", "")
      .add("nz", "")
      .add("x-min", "")
      .add("x-max", "")
      .add("nx", "")
      .add("out", "output file")
      .add("format", "csv");

  auto* dmin_cmd = app.add_subcommand("dscale-min", "D -> infinity ground state at one alpha0");
  FlagSet dmin_flags(dmin_cmd);
  add_field_flags(dmin_flags);
  dmin_flags.add("n", "electron count")
      .add("hamiltonian", "cf|da|planar")
      .add("mass-gauge", "on|off")
      .add("restarts", "random restarts")
      .add("seed", "RNG seed")
      .add("jobs", "worker threads")
      .add("drop-unbound", "on|off")
      .add("out", "output file")
      .add("format", "json");

  auto* scf_cmd = app.add_subcommand("scf", "unrestricted Hartree-Fock in a floating Gaussian basis");
  FlagSet scf_flags(scf_cmd);
  add_field_flags(scf_flags);
  scf_flags.add("n", "electron count")
      .add("mass-gauge", "on|off")
      .add("basis", "basis file (default: even-tempered on the turning points)")
      .add("route", "phase|cubature nuclear attraction")
      .add("cubature-tol", "relative tolerance of the cubature route")
      .add("jobs", "threads for the cubature route")
      .add("damping", "")
      .add("level-shift", "")
      .add("max-iterations", "")
      .add("density-out", "write the y = y0 density grid as CSV")
      .add("y0", "")
      .add("nx", "")
      .add("nz", "")
      .add("out", "output file")
      .add("format", "json");

  auto sweep_keys = [](FlagSet& f) {
    add_field_flags(f);
    f.add("n", "largest electron count")
        .add("hamiltonian", "cf|da|planar, comma separated")
        .add("mass-gauge", "on|off")
        .add("restarts", "random restarts per point")
        .add("seed", "RNG seed")
        .add("jobs", "worker threads")
        .add("out", "output directory")
        .add("format", "csv|json");
  };
  auto* sweep_cmd = app.add_subcommand("sweep", "binding-energy curves over an alpha0 grid");
  FlagSet sweep_flags(sweep_cmd);
  sweep_keys(sweep_flags);
  auto* cmp_cmd = app.add_subcommand("compare", "dscale vs SCF binding-energy curves");
  FlagSet cmp_flags(cmp_cmd);
  sweep_keys(cmp_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "kramers: " << e.what() << "\n";
    return 2;
  }

  try {
    std::map<std::string, std::string> config;
    if (!config_path.empty()) {
      try {
        config = io::parse_config(io::read_text(config_path));
      } catch (const Error& e) {
        throw UsageError(config_path + ": " + e.what());
      }
    }
    if (grid_cmd->parsed()) return run_potential_grid(grid_flags.merge(config));
    if (box_cmd->parsed()) return run_box1d(box_flags.merge(config));
    if (dmin_cmd->parsed()) return run_dscale_min(dmin_flags.merge(config));
    if (scf_cmd->parsed()) return run_scf(scf_flags.merge(config));
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_flags.merge(config));
    if (cmp_cmd->parsed()) return run_compare(cmp_flags.merge(config));
  } catch (const UsageError& e) {
    std::cerr << "kramers: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kramers: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
