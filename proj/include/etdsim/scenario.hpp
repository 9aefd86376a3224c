/// @file scenario.hpp
/// @brief Scenario configuration, the circular-flow benchmark problem, the
///        simulation driver with timing phases, the benchmark suite, and
///        CSV field I/O.
#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "etdsim/steppers.hpp"

namespace etdsim {

// ============================================================================
// Configuration
// ============================================================================

enum class VelocityKind { circular, zero, custom_file };
enum class InitialConditionKind { step_x, custom_file };

/// A complete run description, parsed from a flat `key = value` text file.
/// Defaults reproduce the desk-scale circular-flow benchmark: a 10 m x 10 m
/// box, circular velocity, kappa_x = 1e-4, kappa_z = 2.5e-5, and a 5/30
/// temperature step in x — so a minimal file only needs nx, nz, dt, steps,
/// and scheme.
struct ScenarioConfig {
    // Required (no usable defaults).
    int nx = 0;
    int nz = 0;
    double dt = 0.0;
    long steps = 0;

    // Domain.
    double x_max = 10.0;
    double z_min = -10.0;
    bool periodic_x = false;

    // Physics.
    double kappa_x = 1e-4;
    double kappa_z = 2.5e-5;
    int n_tracers = 1;

    // Velocity.
    VelocityKind velocity = VelocityKind::circular;
    std::string velocity_u_file;
    std::string velocity_w_file;
    /// Recompute w from the discrete thickness budget instead of
    /// prescribing it (isopycnal coordinates force w = 0).
    bool derive_w = false;
    VerticalCoordinate vertical_coordinate = VerticalCoordinate::zlevel;

    // Initial condition.
    InitialConditionKind initial_condition = InitialConditionKind::step_x;
    double ic_left = 5.0;
    double ic_right = 30.0;
    /// Split position of the step; NaN means x_max / 2.
    double ic_split_x = std::numeric_limits<double>::quiet_NaN();
    /// Tracer t uses step values shifted by t * ic_tracer_offset, so each
    /// tracer approaches a different steady state.
    double ic_tracer_offset = 1.0;
    std::string ic_file;

    // Time stepping (dt is copied into scheme.dt after parsing).
    SchemeConfig scheme;

    // Output.
    long snapshot_every = 0;   ///< 0 disables intermediate snapshots
    std::string output_dir = ".";  ///< empty string disables file output
};

/// Parse a scenario from a config file.  Unknown keys, duplicate keys, type
/// errors, and invariant violations are reported with `path:line:` prefixes.
ScenarioConfig load_scenario_file(const std::string& path);

/// Same parser over an in-memory string; diagnostics use the given name.
ScenarioConfig load_scenario_string(const std::string& text,
                                    const std::string& name = "<config>");

/// One line per key: `name  default  description`, for --help and the
/// README.
std::string describe_config_keys();

// ============================================================================
// Benchmark velocity field
// ============================================================================

/// The circular, divergence-free, boundary-tangential field
///   (u, w) = (-psi1(x) psi2'(z), psi1'(x) psi2(z)),
///   psi1 = 1 - (x - x_max/2)^4 / (x_max/2)^4,
///   psi2 = 1 - (z - z_min/2)^2 / (z_min/2)^2.
/// Throws when (x, z) lies outside [0, x_max] x [z_min, 0].
std::pair<double, double> velocity_circular(double x, double z, double x_max,
                                            double z_min);

/// Exact extrema of the circular field: max|u| = -4/z_min at
/// (x_max/2, {0, z_min}) and max|w| = 8/x_max at ({0, x_max}, z_min/2).
/// Used for CFL reporting, since the staggered grid undersamples the
/// near-wall maxima.
std::pair<double, double> velocity_circular_extrema(double x_max, double z_min);

// ============================================================================
// State construction and simulation driver
// ============================================================================

Mesh2D build_mesh(const ScenarioConfig& config);

/// Sample velocity at the staggered locations, build thicknesses and the
/// step (or file) initial condition for every tracer.
TracerState build_state(const ScenarioConfig& config, const Mesh2D& mesh);

/// Wall-clock accounting of one run.
struct TimingReport {
    std::string scheme;
    long steps = 0;
    double dt = 0.0;
    int n_tracers = 1;
    double total_seconds = 0.0;  ///< stepping loop only (setup excluded)
    StepTimers phases;

    double per_tracer_seconds() const {
        return n_tracers > 0 ? total_seconds / n_tracers : total_seconds;
    }
};

struct RunResult {
    TracerState final_state;
    TimingReport timing;
    CflReport cfl;
    /// -1 when the run completed; otherwise the step at which a stability
    /// failure (non-finite or runaway field) was detected.
    long aborted_at_step = -1;
    std::string abort_reason;
    /// Relative drift of the tracer budget sum(A_i hT) over the run, per
    /// tracer.
    std::vector<double> mass_drift;
    /// max|T_n - T_{n-1}| / dt after the last step (steady-state
    /// diagnostic; logged, never used for termination).
    double steady_residual = 0.0;
};

/// Run a configured simulation: fixed step count, per-step stability
/// guards, optional snapshots, and a final field + timing report.
/// Deterministic for a given config.  Stability failures are reported in
/// the result, not thrown.
RunResult run_simulation(const ScenarioConfig& config);

/// Render a human-readable summary (CFL, timings, conservation, abort
/// state) of a finished run.
std::string summarize_run(const RunResult& result);

// ============================================================================
// Benchmark suite
// ============================================================================

struct BenchmarkRow {
    std::string scheme;
    int n_tracers = 1;
    double dt = 0.0;
    long steps = 0;
    bool completed = false;
    long aborted_at_step = -1;
    double total_seconds = 0.0;
    double per_tracer_seconds = 0.0;
    StepTimers phases;
};

struct BenchmarkTable {
    std::vector<BenchmarkRow> rows;

    /// Aligned text table with per-tracer scaling ratios per scheme.
    std::string to_text() const;
    /// Machine-readable CSV, one row per (scheme, tracer count) cell.
    std::string to_csv() const;
};

/// Run every (scheme, tracer count) combination on copies of the base
/// configuration and collect the timing comparison.
BenchmarkTable run_benchmark_suite(const ScenarioConfig& base,
                                   const std::vector<Scheme>& schemes,
                                   const std::vector<int>& tracer_counts);

// ============================================================================
// Field CSV I/O
// ============================================================================

/// Write `x,z,value` rows (17 significant digits) in layer-major order,
/// with coordinates at the field's native staggered locations.
void write_field_csv(const LayeredField& field, const Mesh2D& mesh,
                     const std::string& path);

/// Read a field written by write_field_csv (or any file in that format);
/// row count, ordering, and coordinates are validated against the mesh.
LayeredField read_field_csv(const std::string& path, const Mesh2D& mesh,
                            FieldKind kind);

// ============================================================================
// Self-test
// ============================================================================

/// Re-run the core phi-function and Krylov invariants (scalar recursion,
/// identity chain, error bound, block-diagonal equivalence, full-dimension
/// exactness, recursion-variant agreement), printing one line per check.
/// Returns true when every check passes.
bool run_phi_selftest(std::ostream& out);

}  // namespace etdsim
