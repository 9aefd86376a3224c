/// @file mesh.hpp
/// @brief Layered C-grid mesh: a 1-D line of cells in the horizontal times a
///        stack of layers in the vertical, plus the discrete calculus
///        operators (divergence, gradient, averages, layer transport).
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace etdsim {

// ============================================================================
// Mesh topology and geometry
// ============================================================================

/// How the vertical coordinate treats layer interfaces.
enum class VerticalCoordinate {
    zlevel,     ///< fixed-depth layers; the free surface lives in the top layer
    isopycnal,  ///< material layers; no transport across interfaces
};

/// A structured line of @c nx cells in the horizontal crossed with @c nz
/// layers in the vertical.  Horizontal cells are Voronoi cells of width
/// @c dx with unit-length edges between them (C-grid staggering: scalars at
/// cell centers, horizontal velocity at vertical edges, vertical transport at
/// layer interfaces).  Layer 0 is the top layer and z points upward, so
/// interface depths are non-positive.
///
/// The adjacency between cells and edges is stored explicitly with outward
/// normal signs, so the discrete operators below are written as sums over
/// incident entities rather than hard-coded index arithmetic.
class Mesh2D {
public:
    /// Build a uniform mesh over [0, x_max] x [z_min, 0].
    /// @param nx        number of horizontal cells (>= 1)
    /// @param nz        number of vertical layers (>= 1)
    /// @param x_max     horizontal extent in meters (> 0)
    /// @param z_min     bottom depth in meters (< 0)
    /// @param periodic  wrap the horizontal direction instead of closing it
    ///                  with boundary edges
    Mesh2D(int nx, int nz, double x_max, double z_min, bool periodic = false);

    int nx() const { return nx_; }
    int nz() const { return nz_; }
    int n_edges() const { return static_cast<int>(edge_cells_.size()); }
    double x_max() const { return x_max_; }
    double z_min() const { return z_min_; }
    double dx() const { return dx_; }
    bool periodic() const { return periodic_; }

    /// Replace the uniform rest thicknesses with a custom per-layer profile
    /// (size nz, all entries > 0, summing to -z_min).
    void set_rest_thicknesses(std::vector<double> h);

    /// Rest thickness of layer k.
    double rest_thickness(int k) const { return h_rest_[k]; }
    const std::vector<double>& rest_thicknesses() const { return h_rest_; }

    // --- geometry --------------------------------------------------------

    double cell_area(int /*i*/) const { return dx_; }
    double edge_length(int /*e*/) const { return 1.0; }
    /// Distance between the centers of the two cells sharing edge e.
    double center_distance(int /*e*/) const { return dx_; }

    double cell_center_x(int i) const { return (i + 0.5) * dx_; }
    double edge_x(int e) const { return e * dx_; }
    /// Rest depth of interface j (j = 0 is the surface, j = nz the bottom).
    double interface_z(int j) const { return iface_z_[j]; }
    /// Rest depth of the center of layer k.
    double layer_center_z(int k) const {
        return iface_z_[k] - 0.5 * h_rest_[k];
    }

    // --- adjacency -------------------------------------------------------

    /// Cells on either side of edge e as {left, right}; -1 marks the
    /// exterior of a non-periodic boundary edge.
    const std::array<int, 2>& edge_cells(int e) const { return edge_cells_[e]; }

    /// Edges incident to cell i, each paired with the outward normal sign
    /// n_{e,i} (+1 if the fixed +x edge normal points out of the cell).
    const std::array<std::pair<int, int>, 2>& cell_edges(int i) const {
        return cell_edges_[i];
    }

    bool is_boundary_edge(int e) const {
        return !periodic_ && (e == 0 || e == nx_);
    }

private:
    int nx_;
    int nz_;
    double x_max_;
    double z_min_;
    double dx_;
    bool periodic_;
    std::vector<double> h_rest_;
    std::vector<double> iface_z_;
    std::vector<std::array<int, 2>> edge_cells_;
    std::vector<std::array<std::pair<int, int>, 2>> cell_edges_;

    void rebuild_interface_depths();
};

// ============================================================================
// Layered fields
// ============================================================================

/// Where a field's degrees of freedom live on the staggered grid.
enum class FieldKind {
    cell,   ///< one value per layer per cell (tracers, thicknesses)
    edge,   ///< one value per layer per horizontal edge (u, horizontal fluxes)
    iface,  ///< one value per layer interface per cell column (w)
};

/// A dense 2-D array of doubles over the layered mesh, stored layer-major:
/// entry (k, i) lives at data()[k * cols() + i].  Shapes by kind:
/// cell = nz x nx, edge = nz x n_edges, iface = (nz + 1) x nx.
class LayeredField {
public:
    LayeredField() = default;
    LayeredField(FieldKind kind, const Mesh2D& mesh);

    FieldKind kind() const { return kind_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int k, int i) { return data_[idx(k, i)]; }
    double operator()(int k, int i) const { return data_[idx(k, i)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    void fill(double v);

    /// Copy column i (all rows) into @p out; out.size() must equal rows().
    void extract_column(int i, std::span<double> out) const;
    /// Overwrite column i (all rows) from @p in; in.size() must equal rows().
    void assign_column(int i, std::span<const double> in);

private:
    FieldKind kind_ = FieldKind::cell;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;

    std::size_t idx(int k, int i) const {
        return static_cast<std::size_t>(k) * cols_ + i;
    }
};

// ============================================================================
// Discrete operators
// ============================================================================

/// Cell-to-edge centered average.  The boundary edges of a non-periodic mesh
/// copy their single interior neighbor.
LayeredField edge_average(const Mesh2D& mesh, const LayeredField& cell_field);

/// Finite-volume divergence of an edge flux:
/// [div Y]_i = (1 / A_i) * sum over incident edges of n_{e,i} Y_e l_e.
LayeredField divergence_cell(const Mesh2D& mesh, const LayeredField& edge_field);

/// Edge-normal gradient of a cell field:
/// [grad psi]_e = (1 / d_e) * sum over adjacent cells of -n_{e,i} psi_i.
/// Boundary edges carry zero gradient (no-flux closure).
LayeredField gradient_edge(const Mesh2D& mesh, const LayeredField& cell_field);

/// Cell-to-interface centered average in the vertical; the surface and
/// bottom interfaces are set to zero (nothing crosses them).
LayeredField vertical_average(const Mesh2D& mesh, const LayeredField& cell_field);

/// Upward vertical difference, indexed by the layer whose top interface it
/// lives on: [dzbar psi]_k = (psi_{k-1} - psi_k) / hbar_k with hbar_k the
/// mean thickness of layers k-1 and k.  Row 0 (the surface) is zero.
LayeredField delta_z_up(const Mesh2D& mesh, const LayeredField& cell_field,
                        const LayeredField& thickness);

/// Downward vertical difference within a layer:
/// [dz psi]_k = (psi_k - psi_{k+1}) / h_k.  The bottom row is zero.
LayeredField delta_z_down(const Mesh2D& mesh, const LayeredField& cell_field,
                          const LayeredField& thickness);

/// Horizontal mass flux per edge, hhat_e * u_e, with hhat_e the centered
/// edge average of the layer thickness.  Every horizontal transport term and
/// the layer transport diagnostic below must use this same flux so that the
/// discrete tracer and thickness budgets close exactly.
LayeredField edge_mass_flux(const Mesh2D& mesh, const LayeredField& thickness,
                            const LayeredField& u_edge);

/// Target layer thicknesses for a z-level run: every layer keeps its rest
/// thickness except the top one, which absorbs the free-surface displacement
/// of its column.
LayeredField h_ale_zlevel(const Mesh2D& mesh, const LayeredField& thickness);

/// Transport across layer interfaces from the discrete thickness budget,
/// accumulated bottom-up with w = 0 at the bottom:
///   w_j = w_{j+1} - [div(hhat_e u_e)]_j - (h_ale_j - h_j) / dt.
/// The horizontal flux is rebuilt internally with edge_mass_flux, so it is
/// identical to the flux the tracer transport terms use.  Positive w moves
/// fluid upward (from a layer into the one above).  The surface value is
/// returned as computed; it vanishes up to rounding whenever the column
/// budget closes, and callers are expected to verify that before zeroing it.
LayeredField compute_vertical_transport(const Mesh2D& mesh,
                                        const LayeredField& thickness,
                                        const LayeredField& u_edge,
                                        const LayeredField& h_ale,
                                        double dt);

}  // namespace etdsim
