/// @file tracer.cpp
/// @brief Flux-form right-hand-side assembly and vertical Jacobian blocks.

#include "etdsim/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "etdsim/kernels.hpp"

namespace etdsim {

namespace {

void require_shape(const LayeredField& f, FieldKind kind, const Mesh2D& mesh,
                   const char* what) {
    const LayeredField ref(kind, mesh);
    if (f.kind() != kind || f.rows() != ref.rows() || f.cols() != ref.cols()) {
        throw std::invalid_argument(std::string(what) +
                                    ": field shape does not match the mesh");
    }
}

/// Donor layer index for interface j (between layers j-1 above and j below):
/// upward transport (w > 0) carries the value of the layer below.
int vertical_donor(double w, int j) { return w > 0.0 ? j : j - 1; }

/// Tracer value carried across edge e by the given edge flux.
double horizontal_edge_value(const Mesh2D& mesh, const LayeredField& conc,
                             int k, int e, double flux,
                             HorizontalAdvection scheme) {
    const auto& cells = mesh.edge_cells(e);
    // Positive flux moves along +x, so the donor is the left cell.
    int donor = flux >= 0.0 ? cells[0] : cells[1];
    int receiver = flux >= 0.0 ? cells[1] : cells[0];
    if (donor < 0) {
        donor = receiver;  // inflow wall; only reachable with zero flux
    }
    if (scheme == HorizontalAdvection::upwind1 || receiver < 0) {
        return conc(k, donor);
    }
    // Third-order upwind-biased reconstruction
    //   That = (-T_upwind,2 + 5 T_donor + 2 T_receiver) / 6,
    // falling back to the donor value when the second upwind cell would lie
    // outside a closed boundary.
    int donor2 = donor + (donor - receiver);
    if (mesh.periodic()) {
        donor2 = (donor2 % mesh.nx() + mesh.nx()) % mesh.nx();
    } else if (donor2 < 0 || donor2 >= mesh.nx()) {
        return conc(k, donor);
    }
    return (-conc(k, donor2) + 5.0 * conc(k, donor) + 2.0 * conc(k, receiver)) /
           6.0;
}

/// Read-modify-write accumulation into a banded matrix entry.
void add_entry(BandedMatrix& m, int row, int col, double v) {
    m.set(row, col, m.at(row, col) + v);
}

}  // namespace

// ============================================================================
// State checks and diagnostics
// ============================================================================

void validate_state(const Mesh2D& mesh, const TracerState& state) {
    for (const LayeredField& t : state.hT) {
        require_shape(t, FieldKind::cell, mesh, "validate_state: hT");
    }
    require_shape(state.h, FieldKind::cell, mesh, "validate_state: h");
    require_shape(state.u, FieldKind::edge, mesh, "validate_state: u");
    require_shape(state.w, FieldKind::iface, mesh, "validate_state: w");
    if (!state.sources.empty() &&
        state.sources.size() != state.hT.size()) {
        throw std::invalid_argument(
            "validate_state: sources must be empty or one per tracer");
    }
    if (state.kappa_x < 0.0 || state.kappa_z < 0.0) {
        throw std::invalid_argument("validate_state: diffusivities must be >= 0");
    }
    for (double h : state.h.values()) {
        if (!(h > 0.0)) {
            throw std::invalid_argument(
                "validate_state: layer thicknesses must be positive");
        }
    }
    double w_max = 0.0;
    for (double w : state.w.values()) {
        w_max = std::max(w_max, std::abs(w));
    }
    const double tol = 1e-12 * (1.0 + w_max);
    for (int i = 0; i < mesh.nx(); ++i) {
        if (std::abs(state.w(0, i)) > tol ||
            std::abs(state.w(mesh.nz(), i)) > tol) {
            throw std::invalid_argument(
                "validate_state: transport through the surface or bottom "
                "interface must vanish");
        }
    }
}

LayeredField concentration(const TracerState& state, int tracer_index) {
    LayeredField out = state.hT.at(tracer_index);
    for (std::size_t n = 0; n < out.size(); ++n) {
        out.data()[n] /= state.h.data()[n];
    }
    return out;
}

CflReport cfl_numbers(const Mesh2D& mesh, const TracerState& state, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("cfl_numbers: dt must be > 0");
    }
    double u_max = 0.0;
    for (double u : state.u.values()) {
        u_max = std::max(u_max, std::abs(u));
    }
    double w_max = 0.0;
    for (double w : state.w.values()) {
        w_max = std::max(w_max, std::abs(w));
    }
    double dz = mesh.rest_thickness(0);
    for (int k = 1; k < mesh.nz(); ++k) {
        dz = std::min(dz, mesh.rest_thickness(k));
    }
    return {u_max * dt / mesh.dx(), w_max * dt / dz};
}

// ============================================================================
// Right-hand side
// ============================================================================

LayeredField assemble_rhs(const Mesh2D& mesh, const TracerState& state,
                          const LayeredField& hT, const AdvectionConfig& adv,
                          RhsTerms terms, int tracer_index) {
    require_shape(hT, FieldKind::cell, mesh, "assemble_rhs: hT");
    const int nx = mesh.nx();
    const int nz = mesh.nz();
    LayeredField f(FieldKind::cell, mesh);

    const bool need_conc = has_term(terms, RhsTerms::horizontal_advection) ||
                           has_term(terms, RhsTerms::horizontal_diffusion) ||
                           has_term(terms, RhsTerms::vertical_advection) ||
                           has_term(terms, RhsTerms::vertical_diffusion);
    LayeredField conc;
    if (need_conc) {
        conc = hT;
        for (std::size_t n = 0; n < conc.size(); ++n) {
            conc.data()[n] /= state.h.data()[n];
        }
    }

    if (has_term(terms, RhsTerms::horizontal_advection) ||
        has_term(terms, RhsTerms::horizontal_diffusion)) {
        const LayeredField hhat = edge_average(mesh, state.h);
        LayeredField edge_flux(FieldKind::edge, mesh);

        if (has_term(terms, RhsTerms::horizontal_advection)) {
            for (int k = 0; k < nz; ++k) {
                for (int e = 0; e < mesh.n_edges(); ++e) {
                    const double mass = hhat(k, e) * state.u(k, e);
                    edge_flux(k, e) =
                        mass * horizontal_edge_value(mesh, conc, k, e, mass,
                                                     adv.horizontal);
                }
            }
            const LayeredField div = divergence_cell(mesh, edge_flux);
            kern::axpy(-1.0, div.data(), f.data(), f.size());
        }

        if (has_term(terms, RhsTerms::horizontal_diffusion) &&
            state.kappa_x > 0.0) {
            const LayeredField grad = gradient_edge(mesh, conc);
            for (int k = 0; k < nz; ++k) {
                for (int e = 0; e < mesh.n_edges(); ++e) {
                    edge_flux(k, e) = hhat(k, e) * state.kappa_x * grad(k, e);
                }
            }
            const LayeredField div = divergence_cell(mesh, edge_flux);
            kern::axpy(1.0, div.data(), f.data(), f.size());
        }
    }

    if (has_term(terms, RhsTerms::vertical_advection)) {
        // Interface flux w * That; each interior interface value is computed
        // once and scattered with opposite signs into the two neighbor
        // layers, so column budgets telescope.
        for (int i = 0; i < nx; ++i) {
            for (int j = 1; j < nz; ++j) {
                const double w = state.w(j, i);
                double that;
                if (adv.vertical == VerticalAdvection::upwind1) {
                    that = conc(vertical_donor(w, j), i);
                } else {
                    that = 0.5 * (conc(j - 1, i) + conc(j, i));
                }
                const double flux = w * that;
                f(j - 1, i) += flux;
                f(j, i) -= flux;
            }
        }
    }

    if (has_term(terms, RhsTerms::vertical_diffusion) && state.kappa_z > 0.0) {
        for (int i = 0; i < nx; ++i) {
            for (int j = 1; j < nz; ++j) {
                const double hbar =
                    0.5 * (state.h(j - 1, i) + state.h(j, i));
                const double g =
                    state.kappa_z * (conc(j - 1, i) - conc(j, i)) / hbar;
                f(j - 1, i) -= g;
                f(j, i) += g;
            }
        }
    }

    if (has_term(terms, RhsTerms::source) && !state.sources.empty()) {
        const auto& src = state.sources.at(tracer_index);
        if (src) {
            for (int k = 0; k < nz; ++k) {
                for (int i = 0; i < nx; ++i) {
                    f(k, i) += src(k, i);
                }
            }
        }
    }

    return f;
}

// ============================================================================
// Vertical Jacobian
// ============================================================================

namespace {

SplitJacobian assemble_vertical_blocks(const Mesh2D& mesh,
                                       const TracerState& state,
                                       const AdvectionConfig& adv,
                                       bool advection, bool diffusion) {
    const int nz = mesh.nz();
    const int bw = std::min(1, nz - 1);
    SplitJacobian jac;
    jac.blocks.reserve(mesh.nx());
    for (int i = 0; i < mesh.nx(); ++i) {
        BandedMatrix block(nz, bw, bw);
        for (int j = 1; j < nz; ++j) {
            // Derivatives of the interface-j fluxes with respect to hT; the
            // same coefficient enters row j-1 and row j with opposite signs
            // (flux form), which keeps the column sums at rounding level.
            if (advection) {
                const double w = state.w(j, i);
                if (adv.vertical == VerticalAdvection::upwind1) {
                    const int donor = vertical_donor(w, j);
                    const double c = w / state.h(donor, i);
                    add_entry(block, j - 1, donor, c);
                    add_entry(block, j, donor, -c);
                } else {
                    const double cu = 0.5 * w / state.h(j - 1, i);
                    const double cd = 0.5 * w / state.h(j, i);
                    add_entry(block, j - 1, j - 1, cu);
                    add_entry(block, j - 1, j, cd);
                    add_entry(block, j, j - 1, -cu);
                    add_entry(block, j, j, -cd);
                }
            }
            if (diffusion && state.kappa_z > 0.0) {
                const double hbar = 0.5 * (state.h(j - 1, i) + state.h(j, i));
                const double a = state.kappa_z / (state.h(j - 1, i) * hbar);
                const double b = state.kappa_z / (state.h(j, i) * hbar);
                add_entry(block, j - 1, j - 1, -a);
                add_entry(block, j - 1, j, b);
                add_entry(block, j, j - 1, a);
                add_entry(block, j, j, -b);
            }
        }
        jac.blocks.push_back(std::move(block));
    }
    return jac;
}

}  // namespace

SplitJacobian assemble_vertical_jacobian(const Mesh2D& mesh,
                                         const TracerState& state,
                                         const AdvectionConfig& adv) {
    return assemble_vertical_blocks(mesh, state, adv, true, true);
}

SplitJacobian assemble_vertical_diffusion_jacobian(const Mesh2D& mesh,
                                                   const TracerState& state) {
    return assemble_vertical_blocks(mesh, state, AdvectionConfig{}, false, true);
}

LayeredField apply_split_jacobian(const SplitJacobian& jac,
                                  const LayeredField& x) {
    if (x.kind() != FieldKind::cell ||
        static_cast<int>(jac.blocks.size()) != x.cols()) {
        throw std::invalid_argument(
            "apply_split_jacobian: field does not match the block layout");
    }
    LayeredField y = x;
    std::vector<double> col(x.rows());
    std::vector<double> out(x.rows());
    for (int i = 0; i < x.cols(); ++i) {
        x.extract_column(i, col);
        banded_matvec(jac.blocks[i], col.data(), out.data());
        y.assign_column(i, out);
    }
    return y;
}

LayeredField horizontal_remainder(const Mesh2D& mesh, const TracerState& state,
                                  const LayeredField& hT,
                                  const AdvectionConfig& adv,
                                  const SplitJacobian& jac, int tracer_index,
                                  const LayeredField* f_precomputed) {
    if (f_precomputed != nullptr) {
        LayeredField r = *f_precomputed;
        const LayeredField jz = apply_split_jacobian(jac, hT);
        kern::axpy(-1.0, jz.data(), r.data(), r.size());
        return r;
    }
    return assemble_rhs(mesh, state, hT, adv, RhsTerms::horizontal,
                        tracer_index);
}

}  // namespace etdsim
