#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "damg/graph.hpp"
#include "damg/path_algebra.hpp"
#include "damg/rational.hpp"

namespace damg {

/// Edge strengths: one scalar per edge, with the
/// pairwise map derived by summing over parallel edges. The per-edge map is
/// the source of truth.
class EdgeWeights {
  public:
    EdgeWeights(DamgPtr base, std::vector<Rational> per_edge)
        : base_(std::move(base)), per_edge_(std::move(per_edge)) {
        if (per_edge_.size() != base_->edges().size())
            throw Error("edge weights must cover every edge");
    }

    static EdgeWeights ones(const DamgPtr& g) {
        return EdgeWeights(g, std::vector<Rational>(g->edges().size(), Rational(1)));
    }

    static EdgeWeights from_map(const DamgPtr& g, const std::map<std::string, Rational>& by_id,
                                const Rational& missing = Rational(1)) {
        for (const auto& [id, _] : by_id)
            if (!g->has_edge_id(id)) throw InvalidIdError("unknown edge id: " + id);
        std::vector<Rational> w;
        w.reserve(g->edges().size());
        for (const auto& e : g->edges()) {
            auto it = by_id.find(e.id);
            w.push_back(it == by_id.end() ? missing : it->second);
        }
        return EdgeWeights(g, std::move(w));
    }

    const DamgPtr& base() const { return base_; }
    const Rational& at_edge(int e) const { return per_edge_.at(e); }
    const std::vector<Rational>& per_edge() const { return per_edge_; }

    Rational pairwise(int x, int y) const {
        Rational acc(0);
        for (int e : base_->in_edges(y))
            if (base_->edge(e).tail == x) acc += per_edge_[e];
        return acc;
    }

  private:
    DamgPtr base_;
    std::vector<Rational> per_edge_;
};

/// Root strengths tau, given on Rt(G).
class RootWeights {
  public:
    RootWeights(DamgPtr base, const std::map<std::string, Rational>& by_label)
        : base_(std::move(base)) {
        for (const auto& [label, _] : by_label) {
            int v = base_->index_of(label);
            if (!base_->is_root(v)) throw Error("root weight given for non-root " + label);
        }
        for (int r : base_->roots()) {
            auto it = by_label.find(base_->label(r));
            if (it == by_label.end())
                throw Error("root weight missing for root " + base_->label(r));
            tau_.emplace(r, it->second);
        }
    }

    static RootWeights ones(const DamgPtr& g) {
        std::map<std::string, Rational> m;
        for (int r : g->roots()) m.emplace(g->label(r), Rational(1));
        return RootWeights(g, m);
    }

    const DamgPtr& base() const { return base_; }
    const Rational& at(int root) const { return tau_.at(root); }

  private:
    DamgPtr base_;
    std::map<int, Rational> tau_;
};

/// tau extended to all vertices by the strength recursion
/// tau(y) = sum over parents z of tau(z) * varsigma(z, y).
inline std::vector<Rational> extend_root_weights(const DamgPtr& g, const EdgeWeights& sigma,
                                                 const RootWeights& tau) {
    std::vector<Rational> out(g->size(), Rational(0));
    for (int y = 0; y < g->size(); ++y) {
        if (g->is_root(y)) {
            out[y] = tau.at(y);
            continue;
        }
        for (int z : g->parents(y)) out[y] += out[z] * sigma.pairwise(z, y);
    }
    return out;
}

namespace detail {

/// Total path weights of an arbitrary per-edge map, by the parent recursion.
inline PathAlgebraElement total_weights_of(const DamgPtr& g,
                                           const std::vector<Rational>& per_edge) {
    PathAlgebraElement out(g);
    for (int x = 0; x < g->size(); ++x) {
        const auto& dx = g->descendants(x);
        std::vector<Rational> row(g->size(), Rational(0));
        row[x] = 1;
        out.set(x, x, Rational(1));
        for (auto yb = dx.find_next(x); yb != Bitset::npos; yb = dx.find_next(yb)) {
            const int y = static_cast<int>(yb);
            Rational acc(0);
            for (int e : g->in_edges(y)) {
                int z = g->edge(e).tail;
                if (dx.test(z) && row[z] != 0) acc += row[z] * per_edge[e];
            }
            row[y] = std::move(acc);
            if (row[y] != 0) out.set(x, y, row[y]);
        }
    }
    return out;
}

/// One row of the recursion above, for a fixed source x.
inline std::vector<Rational> total_weights_row(const Damg& g, const std::vector<Rational>& per_edge,
                                               int x) {
    std::vector<Rational> row(g.size(), Rational(0));
    row[x] = 1;
    const auto& dx = g.descendants(x);
    for (auto yb = dx.find_next(x); yb != Bitset::npos; yb = dx.find_next(yb)) {
        const int y = static_cast<int>(yb);
        Rational acc(0);
        for (int e : g.in_edges(y)) {
            int z = g.edge(e).tail;
            if (dx.test(z) && row[z] != 0) acc += row[z] * per_edge[e];
        }
        row[y] = std::move(acc);
    }
    return row;
}

}  // namespace detail

/// sigma(x, y): aggregated strength over all directed paths from x to y.
inline PathAlgebraElement total_path_weights(const DamgPtr& g, const EdgeWeights& sigma) {
    return detail::total_weights_of(g, sigma.per_edge());
}

/// Normalized projection weights q: incoming weights of every non-root sum
/// to one. Kernel construction always uses exact rationals.
class ProjectionKernel {
  public:
    ProjectionKernel(DamgPtr base, std::vector<Rational> per_edge, std::string provenance)
        : base_(std::move(base)), per_edge_(std::move(per_edge)),
          provenance_(std::move(provenance)) {
        if (per_edge_.size() != base_->edges().size())
            throw Error("kernel must assign a weight to every edge");
        normalized_ = verify_normalized();
    }

    static ProjectionKernel from_map(const DamgPtr& g, const std::map<std::string, Rational>& by_id,
                                     std::string provenance = "file") {
        for (const auto& [id, _] : by_id)
            if (!g->has_edge_id(id)) throw InvalidIdError("unknown edge id: " + id);
        std::vector<Rational> w;
        w.reserve(g->edges().size());
        for (const auto& e : g->edges()) {
            auto it = by_id.find(e.id);
            w.push_back(it == by_id.end() ? Rational(0) : it->second);
        }
        return ProjectionKernel(g, std::move(w), std::move(provenance));
    }

    const DamgPtr& base() const { return base_; }
    bool normalized() const { return normalized_; }
    const std::string& provenance() const { return provenance_; }
    const Rational& at_edge(int e) const { return per_edge_.at(e); }
    const Rational& at_edge(const std::string& id) const {
        return per_edge_.at(base_->edge_index(id));
    }
    const std::vector<Rational>& per_edge() const { return per_edge_; }

    Rational pairwise(int x, int y) const {
        Rational acc(0);
        for (int e : base_->in_edges(y))
            if (base_->edge(e).tail == x) acc += per_edge_[e];
        return acc;
    }

  private:
    bool verify_normalized() const {
        for (int y = 0; y < base_->size(); ++y) {
            if (base_->is_root(y)) continue;
            Rational acc(0);
            for (int e : base_->in_edges(y)) acc += per_edge_[e];
            if (acc != 1) return false;
        }
        return true;
    }

    DamgPtr base_;
    std::vector<Rational> per_edge_;
    bool normalized_ = false;
    std::string provenance_;
};

/// q(x -e-> y) = pi(x) / pi(y): splits synergy uniformly over root paths.
inline ProjectionKernel path_uniform_kernel(const DamgPtr& g) {
    auto pi = path_count_totals(*g);
    std::vector<Rational> w;
    w.reserve(g->edges().size());
    for (const auto& e : g->edges()) w.push_back(pi[e.tail] / pi[e.head]);
    return ProjectionKernel(g, std::move(w), "path-uniform");
}

/// q(x -e-> y) = 1 / |E(y)|.
inline ProjectionKernel edge_uniform_kernel(const DamgPtr& g) {
    std::vector<Rational> w;
    w.reserve(g->edges().size());
    for (const auto& e : g->edges())
        w.push_back(Rational(1, static_cast<int>(g->in_edges(e.head).size())));
    return ProjectionKernel(g, std::move(w), "edge-uniform");
}

/// q(x -e-> y) = tau(x)/tau(y) * varsigma(e); normalized by the strength
/// recursion. Undefined when a non-root strength vanishes.
inline ProjectionKernel induced_kernel(const DamgPtr& g, const EdgeWeights& sigma,
                                       const RootWeights& tau) {
    auto strengths = extend_root_weights(g, sigma, tau);
    for (int y = 0; y < g->size(); ++y)
        if (!g->is_root(y) && strengths[y] == 0) throw ZeroStrengthError(g->label(y));
    const auto& edges = g->edges();
    std::vector<Rational> w;
    w.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        w.push_back(strengths[edges[i].tail] / strengths[edges[i].head] *
                    sigma.at_edge(static_cast<int>(i)));
    return ProjectionKernel(g, std::move(w), "induced");
}

/// s(x|y): total path weights of the kernel, the coefficients of the
/// Shapley formula.
inline PathAlgebraElement kernel_total_weights(const DamgPtr& g, const ProjectionKernel& q) {
    return detail::total_weights_of(g, q.per_edge());
}

/// Checks that (vertex_map, edge_map) is an automorphism of the graph and
/// of every supplied weight system. Throws NotABijectionError if the maps
/// are not total bijections; returns false on any structural mismatch.
inline bool verify_automorphism(const DamgPtr& g, const std::map<std::string, std::string>& vmap,
                                const std::map<std::string, std::string>& emap,
                                const EdgeWeights* sigma = nullptr,
                                const RootWeights* tau = nullptr,
                                const ProjectionKernel* q = nullptr) {
    const int n = g->size();
    if (static_cast<int>(vmap.size()) != n)
        throw NotABijectionError("vertex map is not total on V");
    Bitset image(n);
    std::vector<int> av(n, -1);
    for (const auto& [from, to] : vmap) {
        int f = g->index_of(from), t = g->index_of(to);
        if (image.test(t)) throw NotABijectionError("vertex map is not injective at " + to);
        image.set(t);
        av[f] = t;
    }
    const auto& edges = g->edges();
    if (emap.size() != edges.size()) throw NotABijectionError("edge map is not total on E");
    std::vector<int> ae(edges.size(), -1);
    std::vector<bool> eimage(edges.size(), false);
    for (const auto& [from, to] : emap) {
        int f = g->edge_index(from), t = g->edge_index(to);
        if (eimage[t]) throw NotABijectionError("edge map is not injective at " + to);
        eimage[t] = true;
        ae[f] = t;
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Edge& src = edges[e];
        const Edge& dst = edges[ae[e]];
        if (dst.tail != av[src.tail] || dst.head != av[src.head]) return false;
        if (sigma && sigma->at_edge(static_cast<int>(e)) != sigma->at_edge(ae[e])) return false;
        if (q && q->at_edge(static_cast<int>(e)) != q->at_edge(ae[e])) return false;
    }
    if (tau) {
        for (int r : g->roots()) {
            if (!g->is_root(av[r])) return false;
            if (tau->at(r) != tau->at(av[r])) return false;
        }
    }
    return true;
}

}  // namespace damg
