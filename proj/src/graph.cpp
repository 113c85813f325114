#include "platoonsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace platoonsim {

namespace {

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

SensingGraph::SensingGraph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 1) throw Error("sensing graph needs at least one agent");
    adjacency_.resize(static_cast<std::size_t>(n));
    for (Edge e : edges) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n) {
            std::ostringstream os;
            os << "edge (" << (e.i + 1) << ", " << (e.j + 1) << ") references a missing agent (n = "
               << n << ")";
            throw Error(os.str());
        }
        if (e.i == e.j) throw Error("self-loops are not allowed in a sensing graph");
        if (!(e.weight > 0.0)) throw Error("sensing edge weights must be positive");
        if (e.i > e.j) std::swap(e.i, e.j);
        if (!weight_by_edge_.emplace(std::make_pair(e.i, e.j), e.weight).second) {
            std::ostringstream os;
            os << "duplicate edge (" << (e.i + 1) << ", " << (e.j + 1) << ")";
            throw Error(os.str());
        }
        edges_.push_back(e);
        adjacency_[static_cast<std::size_t>(e.i)].push_back(e.j);
        adjacency_[static_cast<std::size_t>(e.j)].push_back(e.i);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return ordered(a.i, a.j) < ordered(b.i, b.j); });
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

SensingGraph SensingGraph::chain(int n) {
    if (n < 2) throw Error("a chain needs at least two agents");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return SensingGraph(n, std::move(edges));
}

bool SensingGraph::has_edge(int a, int b) const {
    if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) return false;
    return weight_by_edge_.count(ordered(a, b)) > 0;
}

double SensingGraph::weight(int a, int b) const {
    auto it = weight_by_edge_.find(ordered(a, b));
    if (it == weight_by_edge_.end()) {
        std::ostringstream os;
        os << "(" << (a + 1) << ", " << (b + 1) << ") is not a sensing edge";
        throw Error(os.str());
    }
    return it->second;
}

bool SensingGraph::is_connected() const {
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adjacency_[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n_;
}

bool SensingGraph::is_chain() const {
    if (static_cast<int>(edges_.size()) != n_ - 1) return false;
    for (int i = 0; i + 1 < n_; ++i) {
        if (!has_edge(i, i + 1)) return false;
    }
    return true;
}

Eigen::MatrixXd SensingGraph::laplacian() const {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
    for (const Edge& e : edges_) {
        l(e.i, e.j) -= e.weight;
        l(e.j, e.i) -= e.weight;
        l(e.i, e.i) += e.weight;
        l(e.j, e.j) += e.weight;
    }
    return l;
}

DesiredOffsets::DesiredOffsets(const SensingGraph& g) {
    for (const Edge& e : g.edges()) values_[{e.i, e.j}] = 0.0;
}

DesiredOffsets DesiredOffsets::uniform_chain(const SensingGraph& chain, double spacing) {
    if (!chain.is_chain()) throw Error("uniform_chain requires a chain graph");
    DesiredOffsets offsets(chain);
    for (int i = 0; i + 1 < chain.size(); ++i) offsets.set(i + 1, i, spacing);
    return offsets;
}

void DesiredOffsets::set(int j, int i, double d_ji) {
    auto it = values_.find(ordered(i, j));
    if (it == values_.end()) {
        std::ostringstream os;
        os << "offset (" << (j + 1) << ", " << (i + 1) << ") does not correspond to a sensing edge";
        throw Error(os.str());
    }
    it->second = (j > i) ? d_ji : -d_ji;
}

double DesiredOffsets::get(int j, int i) const {
    auto it = values_.find(ordered(i, j));
    if (it == values_.end()) {
        std::ostringstream os;
        os << "offset (" << (j + 1) << ", " << (i + 1) << ") does not correspond to a sensing edge";
        throw Error(os.str());
    }
    return (j > i) ? it->second : -it->second;
}

std::vector<std::tuple<int, int, double>> DesiredOffsets::entries() const {
    std::vector<std::tuple<int, int, double>> out;
    out.reserve(values_.size());
    for (const auto& [edge, d] : values_) out.emplace_back(edge.second, edge.first, d);
    return out;
}

Eigen::VectorXd solve_reference_positions(const SensingGraph& g, const DesiredOffsets& offsets,
                                          double tol) {
    if (!g.is_connected()) throw Error("reference positions require a connected sensing graph");
    const int n = g.size();
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    placed[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g.neighbors(v)) {
            if (placed[static_cast<std::size_t>(w)]) continue;
            p[w] = p[v] + offsets.get(w, v);  // D_wv = p_w - p_v
            placed[static_cast<std::size_t>(w)] = 1;
            stack.push_back(w);
        }
    }
    // Every non-tree edge must agree with the propagated positions.
    int worst_i = -1, worst_j = -1;
    double worst = 0.0;
    for (const Edge& e : g.edges()) {
        double residual = std::abs(p[e.j] - p[e.i] - offsets.get(e.j, e.i));
        if (residual > worst) {
            worst = residual;
            worst_i = e.i;
            worst_j = e.j;
        }
    }
    if (worst > tol) throw NotRealizableError(worst_i, worst_j, worst, tol);
    return p;
}

}  // namespace platoonsim
