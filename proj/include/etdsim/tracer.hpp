/// @file tracer.hpp
/// @brief Semi-discrete tracer transport: right-hand-side assembly in flux
///        form, the per-column vertical Jacobian blocks, and the horizontal
///        remainder of the vertical/horizontal operator splitting.
#pragma once

#include <functional>
#include <vector>

#include "etdsim/banded.hpp"
#include "etdsim/mesh.hpp"

namespace etdsim {

// ============================================================================
// Configuration
// ============================================================================

/// Horizontal reconstruction of the tracer at cell edges.
enum class HorizontalAdvection {
    upwind1,  ///< first-order donor cell
    upwind3,  ///< third-order upwind-biased, first-order fallback at walls
};

/// Vertical reconstruction of the tracer at layer interfaces.
enum class VerticalAdvection {
    upwind1,   ///< first-order donor layer
    centered,  ///< arithmetic mean of the two adjacent layers
};

struct AdvectionConfig {
    HorizontalAdvection horizontal = HorizontalAdvection::upwind1;
    VerticalAdvection vertical = VerticalAdvection::upwind1;
};

/// Term groups of the tracer right-hand side, combinable as a bitmask.
/// The "horizontal" group is exactly the remainder of the operator split
/// (everything the vertical Jacobian does not cover, sources included).
enum class RhsTerms : unsigned {
    horizontal_advection = 1u << 0,
    horizontal_diffusion = 1u << 1,
    vertical_advection = 1u << 2,
    vertical_diffusion = 1u << 3,
    source = 1u << 4,
    horizontal = horizontal_advection | horizontal_diffusion | source,
    vertical = vertical_advection | vertical_diffusion,
    all = horizontal | vertical,
};

constexpr RhsTerms operator|(RhsTerms a, RhsTerms b) {
    return static_cast<RhsTerms>(static_cast<unsigned>(a) |
                                 static_cast<unsigned>(b));
}

constexpr bool has_term(RhsTerms set, RhsTerms bit) {
    return (static_cast<unsigned>(set) & static_cast<unsigned>(bit)) != 0;
}

// ============================================================================
// State
// ============================================================================

/// Prognostic and prescribed fields of the tracer problem.  The solver
/// advances the thickness-weighted tracer hT (the conserved quantity of the
/// flux-form budget); divide by h for concentrations.  All tracers share the
/// same h, u, w, so they also share one Jacobian.
struct TracerState {
    std::vector<LayeredField> hT;  ///< one cell field per tracer
    LayeredField h;                ///< layer thickness (cell, > 0)
    LayeredField u;                ///< horizontal velocity (edge, m/s)
    LayeredField w;                ///< cross-interface transport (iface, m/s)
    double kappa_x = 0.0;          ///< horizontal diffusivity (m^2/s)
    double kappa_z = 0.0;          ///< vertical diffusivity (m^2/s)
    /// Optional per-tracer source terms added to d(hT)/dt; empty, or one
    /// entry per tracer (entries may be null).  Sources belong to the
    /// explicit remainder, never to the vertical Jacobian.
    std::vector<std::function<double(int k, int i)>> sources;

    int n_tracers() const { return static_cast<int>(hT.size()); }
};

/// Check shapes against the mesh, positivity of h, and zero transport
/// through the surface and bottom interfaces.  Throws on violation.
void validate_state(const Mesh2D& mesh, const TracerState& state);

/// Concentration T = hT / h of one tracer (for output and diagnostics).
LayeredField concentration(const TracerState& state, int tracer_index);

// ============================================================================
// Right-hand side and Jacobian
// ============================================================================

/// The vertical Jacobian of the operator splitting: one independent
/// tridiagonal block per horizontal column, acting on per-column hT vectors.
struct SplitJacobian {
    std::vector<BandedMatrix> blocks;  ///< nx blocks, each nz x nz
    long assembled_at = -1;            ///< step index the blocks belong to
};

/// Assemble d(hT)/dt for one tracer in flux form:
///   F = -div(hhat_e u_e That_e) - That_k w_k + That_{k+1} w_{k+1}
///       + div(hhat_e kappa_x grad T) + (g_k - g_{k+1}) + source,
/// with g the interface diffusive flux kappa_z * dzbar(T).  @p terms selects
/// which groups are evaluated; @p hT is the field to evaluate at (stage
/// vectors included), while thickness and transport come from @p state.
LayeredField assemble_rhs(const Mesh2D& mesh, const TracerState& state,
                          const LayeredField& hT, const AdvectionConfig& adv,
                          RhsTerms terms = RhsTerms::all, int tracer_index = 0);

/// Exact Jacobian of the vertical advection + vertical diffusion terms of
/// assemble_rhs with respect to hT.  Tracer-independent by linearity.
SplitJacobian assemble_vertical_jacobian(const Mesh2D& mesh,
                                         const TracerState& state,
                                         const AdvectionConfig& adv);

/// Jacobian of the vertical diffusion term alone (the operator made
/// implicit by the RK4 + implicit-Euler baseline).
SplitJacobian assemble_vertical_diffusion_jacobian(const Mesh2D& mesh,
                                                   const TracerState& state);

/// y = J^z x, applied block by block over columns.
LayeredField apply_split_jacobian(const SplitJacobian& jac,
                                  const LayeredField& x);

/// The remainder R(hT) = F(hT) - J^z hT of the operator split.  By default
/// it is assembled directly from the horizontal term group (advection,
/// diffusion, source).  When @p f_precomputed holds a full F evaluated at
/// the same @p hT, the algebraic form F - J^z hT is returned instead -- the
/// first-stage fast path, where F is already in hand.
LayeredField horizontal_remainder(const Mesh2D& mesh, const TracerState& state,
                                  const LayeredField& hT,
                                  const AdvectionConfig& adv,
                                  const SplitJacobian& jac,
                                  int tracer_index = 0,
                                  const LayeredField* f_precomputed = nullptr);

// ============================================================================
// Diagnostics
// ============================================================================

struct CflReport {
    double cfl_x = 0.0;
    double cfl_z = 0.0;
};

/// CFL_x = max|u| dt / dx and CFL_z = max|w| dt / dz, with maxima taken over
/// the stored staggered fields and dz the smallest rest thickness.
CflReport cfl_numbers(const Mesh2D& mesh, const TracerState& state, double dt);

}  // namespace etdsim
