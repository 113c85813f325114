#pragma once

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "platoonsim/errors.hpp"

namespace platoonsim {

/// One undirected sensing link between agents i < j with a positive weight.
struct Edge {
    int i = 0;
    int j = 0;
    double weight = 1.0;
};

/// Undirected weighted sensing graph over n agents, immutable after
/// construction. Agents are 0-based internally; file formats and reports use
/// 1-based labels.
class SensingGraph {
public:
    /// Validates: n >= 1, endpoints in range and distinct, weights > 0,
    /// no duplicate edges. Edges are normalized to i < j and sorted.
    SensingGraph(int n, std::vector<Edge> edges);

    /// Path graph 1-2-...-n. Requires n >= 2.
    static SensingGraph chain(int n);

    int size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(int a, int b) const;
    double weight(int a, int b) const;  ///< throws Error if {a,b} is not an edge

    /// Number of edges incident to a (unweighted).
    int degree(int a) const { return static_cast<int>(adjacency_.at(a).size()); }
    const std::vector<int>& neighbors(int a) const { return adjacency_.at(a); }

    bool is_connected() const;
    /// True iff the edge set is exactly {0-1, 1-2, ..., (n-2)-(n-1)}.
    bool is_chain() const;

    /// Weighted graph Laplacian L = diag(row sums of W) - W. Symmetric PSD;
    /// L * ones == 0.
    Eigen::MatrixXd laplacian() const;

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;          // sorted neighbor lists
    std::map<std::pair<int, int>, double> weight_by_edge_;  // key (min,max)
};

/// Desired inter-agent offsets D_ji = p_j - p_i at the target formation,
/// defined on exactly the edges of a sensing graph and stored
/// antisymmetrically: get(j, i) == -get(i, j).
class DesiredOffsets {
public:
    /// Every edge of g starts with offset zero.
    explicit DesiredOffsets(const SensingGraph& g);

    /// Uniform spacing along a chain: D_{l+1,l} = spacing for every link.
    static DesiredOffsets uniform_chain(const SensingGraph& chain, double spacing);

    /// Sets D_ji (and implicitly D_ij = -D_ji). Throws Error if {i,j} is not
    /// an edge of the originating graph.
    void set(int j, int i, double d_ji);
    double get(int j, int i) const;

    /// All offsets as (j, i, D_ji) with j > i, one entry per undirected edge,
    /// sorted; used for serialization.
    std::vector<std::tuple<int, int, double>> entries() const;

private:
    // key (min,max) -> D_{max,min}
    std::map<std::pair<int, int>, double> values_;
};

/// Solves p_j - p_i = D_ji over a connected graph, anchored at p_0 = 0.
/// Positions are propagated along a spanning tree, then every edge is checked;
/// a residual above tol on any edge throws NotRealizableError (carrying the
/// worst edge). Throws Error if g is not connected.
Eigen::VectorXd solve_reference_positions(const SensingGraph& g,
                                          const DesiredOffsets& offsets,
                                          double tol = 1e-9);

}  // namespace platoonsim
