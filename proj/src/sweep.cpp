#include "kramers/sweep.hpp"

#include "kramers/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

#ifndef KRAMERS_VERSION
#define KRAMERS_VERSION "dev"
#endif

namespace kramers {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error("'" + key + "': expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw Error("'" + key + "': expected an integer, got '" + v + "'");
  return static_cast<long>(x);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string point_key(const SweepPoint& p) {
  return dscale::hamiltonian_name(p.hamiltonian) + "_N" + std::to_string(p.N) + "_a" +
         std::to_string(p.alpha0_index);
}

io::Json positions_json(const std::vector<Vec3>& ps) {
  io::Json a = io::Json::array();
  for (const auto& p : ps) a.push_back(io::vec3(p));
  return a;
}

// Point cache files keep full double precision.
io::Json point_cache_json(const SweepPoint& p) {
  auto exact = [](const std::vector<Vec3>& ps) {
    io::Json a = io::Json::array();
    for (const auto& v : ps) a.push_back({v.x(), v.y(), v.z()});
    return a;
  };
  return {{"key", point_key(p)},
          {"hamiltonian", dscale::hamiltonian_name(p.hamiltonian)},
          {"alpha0_index", p.alpha0_index},
          {"alpha0", p.alpha0},
          {"N", p.N},
          {"failed", p.failed},
          {"error", p.error},
          {"raw_energy", p.failed ? io::Json(nullptr) : io::Json(p.raw_energy)},
          {"localized_energy", p.failed ? io::Json(nullptr) : io::Json(p.localized_energy)},
          {"n_bound", p.n_bound},
          {"converged", p.converged},
          {"positions", exact(p.positions)},
          {"localized_positions", exact(p.localized_positions)},
          {"wall_time", p.wall_time}};
}

SweepPoint point_from_cache(const io::Json& j) {
  SweepPoint p;
  p.hamiltonian = dscale::parse_hamiltonian(j.at("hamiltonian").get<std::string>());
  p.alpha0_index = j.at("alpha0_index").get<int>();
  p.alpha0 = j.at("alpha0").get<double>();
  p.N = j.at("N").get<int>();
  p.failed = j.at("failed").get<bool>();
  p.error = j.at("error").get<std::string>();
  p.raw_energy = j.at("raw_energy").is_null() ? kNaN : j.at("raw_energy").get<double>();
  p.localized_energy = j.at("localized_energy").is_null() ? kNaN : j.at("localized_energy").get<double>();
  p.n_bound = j.at("n_bound").get<int>();
  p.converged = j.at("converged").get<bool>();
  auto vecs = [](const io::Json& a) {
    std::vector<Vec3> out;
    for (const auto& v : a) out.emplace_back(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>());
    return out;
  };
  p.positions = vecs(j.at("positions"));
  p.localized_positions = vecs(j.at("localized_positions"));
  p.wall_time = j.at("wall_time").get<double>();
  p.resumed = true;
  return p;
}

io::Json kind_json(const TrajectoryKind& kind) {
  io::Json j{{"name", kind_name(kind)}};
  if (const auto* e = std::get_if<traj::Elliptical>(&kind)) {
    j["eps1"] = io::number(e->eps1);
    j["eps2"] = io::number(e->eps2);
    j["beta1"] = io::number(e->beta1);
    j["beta2"] = io::number(e->beta2);
  } else if (const auto* c = std::get_if<traj::Circular>(&kind)) {
    j["eps"] = io::number(c->eps);
    j["beta"] = io::number(c->beta);
  } else if (const auto* m = std::get_if<traj::Multicolor>(&kind)) {
    io::Json tones = io::Json::array();
    for (const auto& t : m->tones)
      tones.push_back({{"amplitude", io::number(t.amplitude)},
                       {"axis", std::string(1, "xyz"[static_cast<int>(t.axis)])},
                       {"harmonic", t.harmonic},
                       {"shape", t.shape == traj::Shape::Cos ? "cos" : "sin"}});
    j["tones"] = tones;
  }
  return j;
}

}  // namespace

void SweepSpec::validate() const {
  if (alpha0.empty()) throw Error("sweep grid is empty");
  for (std::size_t i = 0; i < alpha0.size(); ++i) {
    if (!(alpha0[i] >= 0.0)) throw Error("sweep grid values must be >= 0");
    if (i && !(alpha0[i] > alpha0[i - 1])) throw Error("sweep grid must be strictly increasing");
  }
  if (n_max < 1) throw Error("n_max must be >= 1");
  if (!(Z > 0.0)) throw Error("Z must be positive");
  if (hamiltonians.empty()) throw Error("no hamiltonian selected");
  if (restarts < 1) throw Error("restarts must be >= 1");
  kramers::validate(kind);
}

FieldParams SweepSpec::field(double a0) const {
  FieldParams p;
  p.alpha0 = a0;
  p.omega = omega;
  p.x_amp_coeff = x_amp_coeff;
  p.validate();
  return p;
}

TrajectoryKind trajectory_from_config(const std::string& name,
                                      const std::map<std::string, std::string>& cfg) {
  auto get = [&](const std::string& key, double fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : to_double(key, it->second);
  };
  TrajectoryKind kind;
  if (name == "nonrel" || name == "rel") {
    kind = parse_kind(name);
  } else if (name == "elliptical") {
    kind = traj::Elliptical{get("eps1", 0.0), get("eps2", 0.0), get("beta1", 0.0), get("beta2", 0.0)};
  } else if (name == "circular") {
    kind = traj::Circular{get("eps", 0.0), get("beta", 0.0)};
  } else if (name == "multicolor") {
    const auto it = cfg.find("tones");
    if (it == cfg.end()) throw Error("multicolor trajectory needs tones=amp:axis:harmonic:shape;...");
    traj::Multicolor m;
    for (const auto& spec : split(it->second, ';')) {
      if (spec.empty()) continue;
      const auto f = split(spec, ':');
      if (f.size() != 4) throw Error("tone '" + spec + "': expected amp:axis:harmonic:cos|sin");
      traj::Tone t;
      t.amplitude = to_double("tones", f[0]);
      if (f[1] == "x") t.axis = traj::Axis::X;
      else if (f[1] == "y") t.axis = traj::Axis::Y;
      else if (f[1] == "z") t.axis = traj::Axis::Z;
      else throw Error("tone axis must be x, y or z");
      t.harmonic = static_cast<int>(to_long("tones", f[2]));
      if (f[3] == "cos") t.shape = traj::Shape::Cos;
      else if (f[3] == "sin") t.shape = traj::Shape::Sin;
      else throw Error("tone shape must be cos or sin");
      m.tones.push_back(t);
    }
    kind = m;
  } else {
    throw Error("unknown trajectory '" + name + "'");
  }
  validate(kind);
  return kind;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto f = split(text, ':');
    if (f.size() != 3) throw Error("grid '" + text + "': expected start:stop:step");
    return make_grid(to_double("alpha0", f[0]), to_double("alpha0", f[1]), to_double("alpha0", f[2]));
  }
  std::vector<double> out;
  for (const auto& v : split(text, ','))
    if (!v.empty()) out.push_back(to_double("alpha0", v));
  return out;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw Error("grid step must be positive");
  std::vector<double> g;
  for (long k = 0;; ++k) {
    const double v = start + step * k;
    if (v > stop + 1e-9 * step) break;
    g.push_back(v);
  }
  return g;
}

SweepSpec spec_from_config(const std::map<std::string, std::string>& cfg, SweepSpec s) {
  static const std::set<std::string> known{
      "z", "n", "alpha0", "omega", "trajectory", "hamiltonian", "mass-gauge", "x-amp-coeff",
      "restarts", "seed", "out", "jobs", "eps1", "eps2", "beta1", "beta2", "eps", "beta", "tones", "format"};
  for (const auto& [k, v] : cfg)
    if (!known.count(k)) throw Error("unknown config key '" + k + "'");
  for (const auto& [k, v] : cfg) {
    if (k == "z") s.Z = to_double(k, v);
    else if (k == "n") s.n_max = static_cast<int>(to_long(k, v));
    else if (k == "alpha0") s.alpha0 = parse_grid(v);
    else if (k == "omega") s.omega = to_double(k, v);
    else if (k == "trajectory") s.kind = trajectory_from_config(v, cfg);
    else if (k == "hamiltonian") {
      s.hamiltonians.clear();
      for (const auto& h : split(v, ','))
        if (!h.empty()) s.hamiltonians.push_back(dscale::parse_hamiltonian(h));
    } else if (k == "mass-gauge") {
      if (v != "on" && v != "off") throw Error("mass-gauge must be on or off");
      s.mass_gauge = v == "on";
    } else if (k == "x-amp-coeff") s.x_amp_coeff = to_double(k, v);
    else if (k == "restarts") s.restarts = static_cast<int>(to_long(k, v));
    else if (k == "seed") s.seed = static_cast<std::uint64_t>(to_long(k, v));
    else if (k == "out") s.out_dir = v;
    else if (k == "jobs") s.jobs = static_cast<int>(to_long(k, v));
  }
  return s;
}

const SweepPoint& SweepResult::at(dscale::Hamiltonian h, int alpha0_index, int N) const {
  for (const auto& p : points)
    if (p.hamiltonian == h && p.alpha0_index == alpha0_index && p.N == N) return p;
  throw Error("no such sweep point");
}

std::vector<double> SweepResult::binding_curve(dscale::Hamiltonian h, int N) const {
  std::vector<double> out;
  for (int i = 0; i < static_cast<int>(spec.alpha0.size()); ++i) out.push_back(at(h, i, N).binding_energy);
  return out;
}

bool SweepResult::any_failed() const {
  return std::any_of(points.begin(), points.end(), [](const SweepPoint& p) { return p.failed; });
}

io::Json sweep_spec_json(const SweepSpec& s) {
  io::Json grid = io::Json::array();
  for (double a : s.alpha0) grid.push_back(io::number(a));
  io::Json hs = io::Json::array();
  for (auto h : s.hamiltonians) hs.push_back(dscale::hamiltonian_name(h));
  return {{"Z", io::number(s.Z)},
          {"n_max", s.n_max},
          {"alpha0", grid},
          {"omega", io::number(s.omega)},
          {"trajectory", kind_json(s.kind)},
          {"x_amp_coeff", io::number(s.x_amp_coeff)},
          {"alpha_f", io::number(kFineStructure)},
          {"hamiltonians", hs},
          {"mass_gauge", s.mass_gauge},
          {"restarts", s.restarts},
          {"seed", s.seed}};
}

io::Json sweep_results_json(const SweepResult& r) {
  io::Json pts = io::Json::array();
  for (const auto& p : r.points) {
    io::Json j{{"hamiltonian", dscale::hamiltonian_name(p.hamiltonian)},
               {"alpha0", io::number(p.alpha0)},
               {"N", p.N},
               {"energy", io::number(p.energy)},
               {"raw_energy", io::number(p.raw_energy)},
               {"binding_energy", io::number(p.binding_energy)},
               {"binding_energy_ev", io::number(p.binding_energy * kHartreeToEv)},
               {"localized_energy", io::number(p.localized_energy)},
               {"n_bound", p.n_bound},
               {"bound", !p.failed && p.n_bound == p.N},
               {"converged", p.converged},
               {"failed", p.failed},
               {"positions", positions_json(p.positions)}};
    if (p.failed) j["error"] = p.error;
    pts.push_back(j);
  }
  return {{"version", KRAMERS_VERSION}, {"spec", sweep_spec_json(r.spec)}, {"points", pts}};
}

SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress) {
  spec.validate();
  const int n_grid = static_cast<int>(spec.alpha0.size());
  const bool persist = !spec.out_dir.empty();
  const auto points_dir = spec.out_dir / "points";
  const io::Json spec_json = sweep_spec_json(spec);

  if (persist) {
    const auto manifest_path = spec.out_dir / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
      const io::Json old = io::read_json(manifest_path);
      if (!old.contains("spec") || old.at("spec") != spec_json)
        throw Error(spec.out_dir.string() + " holds a sweep with a different spec");
    }
    std::filesystem::create_directories(points_dir);
    io::write_json(manifest_path, {{"version", KRAMERS_VERSION}, {"spec", spec_json}, {"status", "running"}});
  }

  struct Chain {
    dscale::Hamiltonian h;
    int N;
  };
  std::vector<Chain> chains;
  for (auto h : spec.hamiltonians)
    for (int N = 1; N <= spec.n_max; ++N) chains.push_back({h, N});

  SweepResult result;
  result.spec = spec;
  result.points.resize(chains.size() * n_grid);
  std::mutex progress_mutex;

  parallel_for(chains.size(), spec.jobs, [&](std::size_t c) {
    const Chain ch = chains[c];
    const SweepPoint* prev = nullptr;
    for (int i = 0; i < n_grid; ++i) {
      SweepPoint& pt = result.points[c * n_grid + i];
      pt.hamiltonian = ch.h;
      pt.alpha0_index = i;
      pt.alpha0 = spec.alpha0[i];
      pt.N = ch.N;
      const auto cache = points_dir / (point_key(pt) + ".json");
      bool loaded = false;
      if (persist && std::filesystem::exists(cache)) {
        try {
          SweepPoint old = point_from_cache(io::read_json(cache));
          if (old.alpha0 == pt.alpha0 && old.N == pt.N && old.hamiltonian == pt.hamiltonian && !old.failed) {
            pt = std::move(old);
            loaded = true;
          }
        } catch (const std::exception&) {
          loaded = false;
        }
      }
      if (!loaded) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const FieldParams fp = spec.field(pt.alpha0);
          const DressedPotential pot(spec.Z, spec.kind, fp);
          const double mass = spec.mass_gauge ? mass_factor(fp) : 1.0;
          dscale::MinimizeOptions mo;
          mo.restarts = spec.restarts;
          mo.seed = spec.seed;
          mo.jobs = 1;
          if (prev && !prev->failed) {
            for (const auto* ps : {&prev->localized_positions, &prev->positions})
              if (static_cast<int>(ps->size()) == ch.N)
                mo.warm_starts.push_back(
                    dscale::rescale_configuration({*ps}, prev->alpha0, pt.alpha0));
          }
          const auto gs = dscale::minimize(ch.h, ch.N, pot, mass, mo);
          pt.raw_energy = gs.energy;
          pt.localized_energy = gs.localized_energy;
          pt.n_bound = gs.n_bound;
          pt.converged = gs.converged;
          pt.positions = gs.config.positions;
          pt.localized_positions = gs.localized_config.positions;
        } catch (const std::exception& e) {
          pt.failed = true;
          pt.error = e.what();
          pt.raw_energy = pt.localized_energy = kNaN;
        }
        pt.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (persist) io::write_json(cache, point_cache_json(pt));
      }
      prev = &pt;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(pt);
      }
    }
  });

  // Order by (hamiltonian, alpha0 index, N) and assemble binding energies.
  std::stable_sort(result.points.begin(), result.points.end(), [&](const SweepPoint& a, const SweepPoint& b) {
    const auto ha = std::find(spec.hamiltonians.begin(), spec.hamiltonians.end(), a.hamiltonian);
    const auto hb = std::find(spec.hamiltonians.begin(), spec.hamiltonians.end(), b.hamiltonian);
    if (ha != hb) return ha < hb;
    if (a.alpha0_index != b.alpha0_index) return a.alpha0_index < b.alpha0_index;
    return a.N < b.N;
  });
  for (std::size_t k = 0; k < result.points.size(); k += spec.n_max) {
    double e_prev = 0.0;
    for (int n = 0; n < spec.n_max; ++n) {
      SweepPoint& p = result.points[k + n];
      if (p.failed || std::isnan(e_prev)) {
        p.energy = p.binding_energy = kNaN;
        e_prev = kNaN;
        continue;
      }
      p.energy = std::min(p.raw_energy, e_prev);
      p.binding_energy = p.energy - e_prev;
      e_prev = p.energy;
    }
  }

  if (persist) {
    io::Json times = io::Json::array();
    for (const auto& p : result.points)
      times.push_back({{"key", point_key(p)},
                       {"wall_time", io::number(p.wall_time)},
                       {"resumed", p.resumed},
                       {"failed", p.failed}});
    io::write_json(spec.out_dir / "manifest.json",
                   {{"version", KRAMERS_VERSION},
                    {"spec", spec_json},
                    {"status", result.any_failed() ? "partial" : "complete"},
                    {"points", times}});
    io::write_json(spec.out_dir / "results.json", sweep_results_json(result));
  }
  return result;
}

std::vector<double> normalized_curve(const std::vector<double>& be) {
  double lo = 0.0;
  for (double v : be)
    if (std::isfinite(v)) lo = std::min(lo, v);
  std::vector<double> out;
  for (double v : be) out.push_back(lo < 0.0 ? v / -lo : (std::isfinite(v) ? 0.0 : v));
  return out;
}

std::string curves_csv(const SweepResult& r, dscale::Hamiltonian h) {
  const int n = r.spec.n_max;
  std::ostringstream out;
  out << "alpha0";
  for (const char* prefix : {"E_", "BE_", "BEnorm_"})
    for (int N = 1; N <= n; ++N) out << "," << prefix << N;
  out << "\n";
  const int n_grid = static_cast<int>(r.spec.alpha0.size());
  if (r.points.empty()) return out.str();
  std::vector<std::vector<double>> norm;
  for (int N = 1; N <= n; ++N) norm.push_back(normalized_curve(r.binding_curve(h, N)));
  for (int i = 0; i < n_grid; ++i) {
    out << io::fmt(r.spec.alpha0[i]);
    for (int N = 1; N <= n; ++N) out << "," << io::fmt(r.at(h, i, N).energy);
    for (int N = 1; N <= n; ++N) out << "," << io::fmt(r.at(h, i, N).binding_energy);
    for (int N = 1; N <= n; ++N) out << "," << io::fmt(norm[N - 1][i]);
    out << "\n";
  }
  return out.str();
}

std::vector<std::filesystem::path> emit_curves(const SweepResult& r, const std::filesystem::path& dir,
                                               CurveFormat format) {
  std::vector<std::filesystem::path> written;
  for (auto h : r.spec.hamiltonians) {
    const std::string base = "curves_" + dscale::hamiltonian_name(h);
    if (format == CurveFormat::Csv) {
      const auto path = dir / (base + ".csv");
      io::write_text(path, curves_csv(r, h));
      written.push_back(path);
      continue;
    }
    io::Json j{{"hamiltonian", dscale::hamiltonian_name(h)}, {"alpha0", io::Json::array()}};
    for (double a : r.spec.alpha0) j["alpha0"].push_back(io::number(a));
    for (int N = 1; N <= r.spec.n_max; ++N) {
      io::Json e = io::Json::array(), be = io::Json::array(), nb = io::Json::array();
      const auto curve = r.points.empty() ? std::vector<double>{} : r.binding_curve(h, N);
      const auto norm = normalized_curve(curve);
      for (std::size_t i = 0; i < curve.size(); ++i) {
        e.push_back(io::number(r.at(h, static_cast<int>(i), N).energy));
        be.push_back(io::number(curve[i]));
        nb.push_back(io::number(norm[i]));
      }
      j["E_" + std::to_string(N)] = e;
      j["BE_" + std::to_string(N)] = be;
      j["BEnorm_" + std::to_string(N)] = nb;
    }
    const auto path = dir / (base + ".json");
    io::write_json(path, j);
    written.push_back(path);
  }
  return written;
}

std::pair<int, int> spin_split(int N) { return {(N + 1) / 2, N / 2}; }

std::vector<ScfCurvePoint> scf_curve(double Z, int N, const std::vector<double>& alpha0,
                                     const TrajectoryKind& kind, bool mass_gauge, double omega,
                                     double x_amp_coeff, const scf::ScfOptions& options, int jobs) {
  if (N < 1) throw Error("SCF curve needs N >= 1");
  std::vector<ScfCurvePoint> out(alpha0.size());
  parallel_for(alpha0.size(), jobs, [&](std::size_t i) {
    ScfCurvePoint& pt = out[i];
    pt.alpha0 = alpha0[i];
    try {
      FieldParams fp;
      fp.alpha0 = alpha0[i];
      fp.omega = omega;
      fp.x_amp_coeff = x_amp_coeff;
      const DressedPotential pot(Z, kind, fp);
      const double mass = mass_gauge ? mass_factor(fp) : 1.0;
      const auto basis = scf::default_basis(pot);
      auto [na, nb] = spin_split(N);
      const auto st = scf::scf_solve(basis, pot, na, nb, mass, options);
      pt.energy_n = st.energy;
      pt.populations = scf::mulliken(st, basis);
      if (N > 1) {
        std::tie(na, nb) = spin_split(N - 1);
        pt.energy_prev = scf::scf_solve(basis, pot, na, nb, mass, options).energy;
      }
      pt.binding_energy = pt.energy_n - pt.energy_prev;
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
      pt.energy_n = pt.energy_prev = pt.binding_energy = kNaN;
    }
  });
  return out;
}

Comparison compare_curves(const std::vector<double>& alpha0, const std::vector<double>& dscale_be,
                          const std::vector<double>& scf_be) {
  if (dscale_be.size() != alpha0.size() || scf_be.size() != alpha0.size())
    throw Error("curves must share the alpha0 grid");
  Comparison c;
  c.alpha0 = alpha0;
  c.dscale_norm = normalized_curve(dscale_be);
  c.scf_norm = normalized_curve(scf_be);
  auto argmin = [](const std::vector<double>& v) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
      if (std::isfinite(v[i]) && (best < 0 || v[i] < v[best])) best = i;
    return best;
  };
  c.dscale_argmin = argmin(c.dscale_norm);
  c.scf_argmin = argmin(c.scf_norm);
  c.shared_argmin = c.dscale_argmin >= 0 && c.dscale_argmin == c.scf_argmin;
  return c;
}

}  // namespace kramers
