#pragma once

// alpha0 sweeps over the D -> infinity minimiser and the SCF engine, and
// binding-energy curve assembly.

#include "kramers/dscale.hpp"
#include "kramers/io.hpp"
#include "kramers/scf.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kramers {

struct SweepSpec {
  double Z = 1.0;
  int n_max = 2;
  std::vector<double> alpha0;
  double omega = 1.0;
  TrajectoryKind kind = traj::RelLinear{};
  double x_amp_coeff = 1.0;
  std::vector<dscale::Hamiltonian> hamiltonians{dscale::Hamiltonian::Planar};
  bool mass_gauge = true;
  int restarts = 24;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::filesystem::path out_dir;  ///< empty: keep results in memory only

  /// Throws Error unless the grid is non-empty and strictly increasing and n_max >= 1.
  void validate() const;
  FieldParams field(double alpha0) const;
};

/// "nonrel", "rel", "elliptical" (keys eps1, eps2, beta1, beta2), "circular"
/// (eps, beta) or "multicolor" (tones = "amp:axis:harmonic:cos|sin;...").
TrajectoryKind trajectory_from_config(const std::string& name,
                                      const std::map<std::string, std::string>& config);

/// Parses "a,b,c" or "start:stop:step".
std::vector<double> parse_grid(const std::string& text);

/// start, start + step, ... up to stop (inclusive within step * 1e-9).
std::vector<double> make_grid(double start, double stop, double step);

/// Builds a spec from key=value entries (keys as the CLI flags without the
/// leading dashes); unknown keys throw Error.
SweepSpec spec_from_config(const std::map<std::string, std::string>& config, SweepSpec base = {});

struct SweepPoint {
  dscale::Hamiltonian hamiltonian = dscale::Hamiltonian::Planar;
  int alpha0_index = 0;
  double alpha0 = 0.0;
  int N = 1;
  double raw_energy = 0.0;  ///< minimiser result (electrons may have been dropped)
  double energy = 0.0;      ///< min(raw_energy, E(N-1)), E(0) = 0
  double binding_energy = 0.0;
  double localized_energy = 0.0;
  int n_bound = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
  std::vector<Vec3> positions;            ///< bound electrons
  std::vector<Vec3> localized_positions;  ///< best minimum with all N electrons
  double wall_time = 0.0;
  bool resumed = false;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepPoint> points;  ///< ordered by (hamiltonian, alpha0 index, N)

  const SweepPoint& at(dscale::Hamiltonian h, int alpha0_index, int N) const;
  /// B.E.(N) over the grid for one Hamiltonian.
  std::vector<double> binding_curve(dscale::Hamiltonian h, int N) const;
  bool any_failed() const;
};

/// Per-point callback, called after each point completes (any thread order).
using SweepProgress = std::function<void(const SweepPoint&)>;

/// Chains over (Hamiltonian, N) run on `jobs` threads; each chain walks the
/// grid in order and warm-starts from the previous point's minimiser.  With
/// an output directory, completed points are stored as points/<key>.json and
/// skipped on rerun; manifest.json and results.json are written at the end.
SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress = {});

io::Json sweep_spec_json(const SweepSpec& spec);
io::Json sweep_results_json(const SweepResult& result);

enum class CurveFormat { Csv, Json };

/// curves_<h>.csv (or .json) per Hamiltonian: alpha0, E_1..E_n, BE_1..BE_n,
/// BEnorm_1..BEnorm_n with BEnorm = BE / |min BE| along the curve.
std::vector<std::filesystem::path> emit_curves(const SweepResult& result, const std::filesystem::path& dir,
                                               CurveFormat format = CurveFormat::Csv);

/// The CSV text for one Hamiltonian (header only for an empty grid).
std::string curves_csv(const SweepResult& result, dscale::Hamiltonian h);

/// BE / |min BE|; all zeros when the curve never goes negative.
std::vector<double> normalized_curve(const std::vector<double>& be);

/// SCF binding-energy curve E(N) - E(N-1) over a grid, default basis.
struct ScfCurvePoint {
  double alpha0 = 0.0;
  double energy_n = 0.0, energy_prev = 0.0;
  double binding_energy = 0.0;
  std::vector<double> populations;
  bool failed = false;
  std::string error;
};

std::vector<ScfCurvePoint> scf_curve(double Z, int N, const std::vector<double>& alpha0,
                                     const TrajectoryKind& kind, bool mass_gauge, double omega = 1.0,
                                     double x_amp_coeff = 1.0, const scf::ScfOptions& options = {},
                                     int jobs = 1);

struct Comparison {
  std::vector<double> alpha0;
  std::vector<double> dscale_norm, scf_norm;
  int dscale_argmin = -1, scf_argmin = -1;
  bool shared_argmin = false;
};

Comparison compare_curves(const std::vector<double>& alpha0, const std::vector<double>& dscale_be,
                          const std::vector<double>& scf_be);

/// Electron split used by the SCF engine: ceil(N/2) alpha, floor(N/2) beta.
std::pair<int, int> spin_split(int N);

}  // namespace kramers
