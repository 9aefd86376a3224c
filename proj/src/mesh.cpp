/// @file mesh.cpp
/// @brief Mesh construction and the discrete calculus operators.

#include "etdsim/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace etdsim {

// ============================================================================
// Mesh2D
// ============================================================================

Mesh2D::Mesh2D(int nx, int nz, double x_max, double z_min, bool periodic)
    : nx_(nx), nz_(nz), x_max_(x_max), z_min_(z_min), periodic_(periodic) {
    if (nx < 1 || nz < 1) {
        throw std::invalid_argument("Mesh2D: nx and nz must be positive");
    }
    if (!(x_max > 0.0) || !(z_min < 0.0)) {
        throw std::invalid_argument("Mesh2D: require x_max > 0 and z_min < 0");
    }
    dx_ = x_max / nx;
    h_rest_.assign(nz, -z_min / nz);
    rebuild_interface_depths();

    // Horizontal adjacency.  Edge e sits at x = e * dx with its normal fixed
    // along +x; the cell on its left sees that normal as outward (+1), the
    // cell on its right as inward (-1).
    const int ne = periodic_ ? nx : nx + 1;
    edge_cells_.resize(ne);
    for (int e = 0; e < ne; ++e) {
        if (periodic_) {
            edge_cells_[e] = {(e + nx - 1) % nx, e % nx};
        } else {
            edge_cells_[e] = {e - 1, e == nx ? -1 : e};
        }
    }
    cell_edges_.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const int left = i;
        const int right = periodic_ ? (i + 1) % nx : i + 1;
        cell_edges_[i] = {{{left, -1}, {right, +1}}};
    }
}

void Mesh2D::set_rest_thicknesses(std::vector<double> h) {
    if (static_cast<int>(h.size()) != nz_) {
        throw std::invalid_argument("set_rest_thicknesses: size must equal nz");
    }
    double total = 0.0;
    for (double hk : h) {
        if (!(hk > 0.0)) {
            throw std::invalid_argument(
                "set_rest_thicknesses: thicknesses must be positive");
        }
        total += hk;
    }
    if (std::abs(total + z_min_) > 1e-10 * std::abs(z_min_)) {
        throw std::invalid_argument(
            "set_rest_thicknesses: thicknesses must sum to the water depth");
    }
    h_rest_ = std::move(h);
    rebuild_interface_depths();
}

void Mesh2D::rebuild_interface_depths() {
    iface_z_.resize(nz_ + 1);
    iface_z_[0] = 0.0;
    for (int k = 0; k < nz_; ++k) {
        iface_z_[k + 1] = iface_z_[k] - h_rest_[k];
    }
}

// ============================================================================
// LayeredField
// ============================================================================

LayeredField::LayeredField(FieldKind kind, const Mesh2D& mesh) : kind_(kind) {
    switch (kind) {
        case FieldKind::cell:
            rows_ = mesh.nz();
            cols_ = mesh.nx();
            break;
        case FieldKind::edge:
            rows_ = mesh.nz();
            cols_ = mesh.n_edges();
            break;
        case FieldKind::iface:
            rows_ = mesh.nz() + 1;
            cols_ = mesh.nx();
            break;
    }
    data_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
}

void LayeredField::fill(double v) {
    for (double& x : data_) {
        x = v;
    }
}

void LayeredField::extract_column(int i, std::span<double> out) const {
    if (static_cast<int>(out.size()) != rows_) {
        throw std::invalid_argument("extract_column: size mismatch");
    }
    for (int k = 0; k < rows_; ++k) {
        out[k] = data_[idx(k, i)];
    }
}

void LayeredField::assign_column(int i, std::span<const double> in) {
    if (static_cast<int>(in.size()) != rows_) {
        throw std::invalid_argument("assign_column: size mismatch");
    }
    for (int k = 0; k < rows_; ++k) {
        data_[idx(k, i)] = in[k];
    }
}

// ============================================================================
// Discrete operators
// ============================================================================

namespace {

void require_kind(const LayeredField& f, FieldKind kind, const char* op) {
    if (f.kind() != kind) {
        throw std::invalid_argument(std::string(op) +
                                    ": field has the wrong staggering");
    }
}

}  // namespace

LayeredField edge_average(const Mesh2D& mesh, const LayeredField& cell_field) {
    require_kind(cell_field, FieldKind::cell, "edge_average");
    LayeredField out(FieldKind::edge, mesh);
    for (int k = 0; k < mesh.nz(); ++k) {
        for (int e = 0; e < mesh.n_edges(); ++e) {
            const auto& cells = mesh.edge_cells(e);
            if (cells[0] >= 0 && cells[1] >= 0) {
                out(k, e) = 0.5 * (cell_field(k, cells[0]) + cell_field(k, cells[1]));
            } else {
                const int inside = cells[0] >= 0 ? cells[0] : cells[1];
                out(k, e) = cell_field(k, inside);
            }
        }
    }
    return out;
}

LayeredField divergence_cell(const Mesh2D& mesh, const LayeredField& edge_field) {
    require_kind(edge_field, FieldKind::edge, "divergence_cell");
    LayeredField out(FieldKind::cell, mesh);
    for (int k = 0; k < mesh.nz(); ++k) {
        for (int i = 0; i < mesh.nx(); ++i) {
            double acc = 0.0;
            for (const auto& [e, sign] : mesh.cell_edges(i)) {
                acc += sign * edge_field(k, e) * mesh.edge_length(e);
            }
            out(k, i) = acc / mesh.cell_area(i);
        }
    }
    return out;
}

LayeredField gradient_edge(const Mesh2D& mesh, const LayeredField& cell_field) {
    require_kind(cell_field, FieldKind::cell, "gradient_edge");
    LayeredField out(FieldKind::edge, mesh);
    for (int k = 0; k < mesh.nz(); ++k) {
        for (int e = 0; e < mesh.n_edges(); ++e) {
            if (mesh.is_boundary_edge(e)) {
                continue;  // no-flux closure: leave the gradient at zero
            }
            const auto& cells = mesh.edge_cells(e);
            // The left cell sees the +x normal as outward, so it enters with
            // -(+1) and the right cell with -(-1).
            out(k, e) = (cell_field(k, cells[1]) - cell_field(k, cells[0])) /
                        mesh.center_distance(e);
        }
    }
    return out;
}

LayeredField vertical_average(const Mesh2D& mesh, const LayeredField& cell_field) {
    require_kind(cell_field, FieldKind::cell, "vertical_average");
    LayeredField out(FieldKind::iface, mesh);
    for (int j = 1; j < mesh.nz(); ++j) {
        for (int i = 0; i < mesh.nx(); ++i) {
            out(j, i) = 0.5 * (cell_field(j - 1, i) + cell_field(j, i));
        }
    }
    return out;
}

namespace {

void require_positive_thickness(const LayeredField& thickness, const char* op) {
    for (double h : thickness.values()) {
        if (!(h > 0.0)) {
            throw std::invalid_argument(std::string(op) +
                                        ": layer thicknesses must be positive");
        }
    }
}

}  // namespace

LayeredField delta_z_up(const Mesh2D& mesh, const LayeredField& cell_field,
                        const LayeredField& thickness) {
    require_kind(cell_field, FieldKind::cell, "delta_z_up");
    require_kind(thickness, FieldKind::cell, "delta_z_up");
    require_positive_thickness(thickness, "delta_z_up");
    LayeredField out(FieldKind::cell, mesh);
    for (int k = 1; k < mesh.nz(); ++k) {
        for (int i = 0; i < mesh.nx(); ++i) {
            const double hbar = 0.5 * (thickness(k - 1, i) + thickness(k, i));
            out(k, i) = (cell_field(k - 1, i) - cell_field(k, i)) / hbar;
        }
    }
    return out;
}

LayeredField delta_z_down(const Mesh2D& mesh, const LayeredField& cell_field,
                          const LayeredField& thickness) {
    require_kind(cell_field, FieldKind::cell, "delta_z_down");
    require_kind(thickness, FieldKind::cell, "delta_z_down");
    require_positive_thickness(thickness, "delta_z_down");
    LayeredField out(FieldKind::cell, mesh);
    for (int k = 0; k + 1 < mesh.nz(); ++k) {
        for (int i = 0; i < mesh.nx(); ++i) {
            out(k, i) = (cell_field(k, i) - cell_field(k + 1, i)) / thickness(k, i);
        }
    }
    return out;
}

LayeredField edge_mass_flux(const Mesh2D& mesh, const LayeredField& thickness,
                            const LayeredField& u_edge) {
    require_kind(thickness, FieldKind::cell, "edge_mass_flux");
    require_kind(u_edge, FieldKind::edge, "edge_mass_flux");
    LayeredField flux = edge_average(mesh, thickness);
    for (int k = 0; k < mesh.nz(); ++k) {
        for (int e = 0; e < mesh.n_edges(); ++e) {
            flux(k, e) *= u_edge(k, e);
        }
    }
    return flux;
}

LayeredField h_ale_zlevel(const Mesh2D& mesh, const LayeredField& thickness) {
    require_kind(thickness, FieldKind::cell, "h_ale_zlevel");
    LayeredField out(FieldKind::cell, mesh);
    for (int i = 0; i < mesh.nx(); ++i) {
        double zeta = 0.0;
        for (int k = 0; k < mesh.nz(); ++k) {
            zeta += thickness(k, i) - mesh.rest_thickness(k);
        }
        out(0, i) = mesh.rest_thickness(0) + zeta;
        for (int k = 1; k < mesh.nz(); ++k) {
            out(k, i) = mesh.rest_thickness(k);
        }
    }
    return out;
}

LayeredField compute_vertical_transport(const Mesh2D& mesh,
                                        const LayeredField& thickness,
                                        const LayeredField& u_edge,
                                        const LayeredField& h_ale,
                                        double dt) {
    require_kind(thickness, FieldKind::cell, "compute_vertical_transport");
    require_kind(h_ale, FieldKind::cell, "compute_vertical_transport");
    require_kind(u_edge, FieldKind::edge, "compute_vertical_transport");
    if (!(dt > 0.0)) {
        throw std::invalid_argument("compute_vertical_transport: dt must be > 0");
    }
    const LayeredField div =
        divergence_cell(mesh, edge_mass_flux(mesh, thickness, u_edge));
    LayeredField w(FieldKind::iface, mesh);
    for (int i = 0; i < mesh.nx(); ++i) {
        // w(nz, i) stays zero: nothing crosses the sea floor.
        for (int j = mesh.nz() - 1; j >= 0; --j) {
            w(j, i) = w(j + 1, i) - div(j, i) - (h_ale(j, i) - thickness(j, i)) / dt;
        }
    }
    return w;
}

}  // namespace etdsim
