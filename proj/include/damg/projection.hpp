#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "damg/graph.hpp"
#include "damg/value_function.hpp"
#include "damg/weights.hpp"

namespace damg {

namespace detail {

/// Edge set of G without z: surviving edges plus one composed edge
/// x -e1*e2-> y per pair (x -e1-> z, z -e2-> y). `sources` records, for
/// each new edge, the old edge index (survivor) or pair (composite).
struct EdgeComposition {
    std::vector<std::string> vertices;
    std::vector<Damg::EdgeSpec> edges;
    std::vector<std::pair<int, int>> sources;  // (e, -1) survivor, (e1, e2) composite
};

inline EdgeComposition compose_without(const Damg& g, int z, std::size_t cap) {
    EdgeComposition out;
    for (int v = 0; v < g.size(); ++v)
        if (v != z) out.vertices.push_back(g.label(v));
    const auto& in = g.in_edges(z);
    const auto& outg = g.out_edges(z);
    std::size_t survivors = 0;
    for (const auto& e : g.edges())
        if (e.tail != z && e.head != z) ++survivors;
    if (survivors + in.size() * outg.size() > cap) throw ProjectionBlowupError(cap);
    for (int i = 0; i < static_cast<int>(g.edges().size()); ++i) {
        const Edge& e = g.edge(i);
        if (e.tail == z || e.head == z) continue;
        out.edges.push_back({e.id, g.label(e.tail), g.label(e.head)});
        out.sources.emplace_back(i, -1);
    }
    for (int e1 : in) {
        for (int e2 : outg) {
            out.edges.push_back({g.edge(e1).id + "*" + g.edge(e2).id,
                                 g.label(g.edge(e1).tail), g.label(g.edge(e2).head)});
            out.sources.emplace_back(e1, e2);
        }
    }
    return out;
}

/// Removal order for subsets: reverse topological (leaves-first within S),
/// which keeps intermediate parallel-edge growth small. Commutativity makes
/// the choice immaterial for the result.
inline std::vector<std::string> removal_order(const Damg& g, const std::set<std::string>& S) {
    std::vector<std::pair<int, std::string>> order;
    for (const auto& label : S) order.emplace_back(g.index_of(label), label);
    std::sort(order.begin(), order.end(), std::greater<>());
    std::vector<std::string> out;
    for (auto& [_, label] : order) out.push_back(label);
    return out;
}

}  // namespace detail

/// Graph and one per-edge weight map with the vertex z projected out; the
/// same composition rule serves both projection kernels q and edge
/// strengths varsigma.
inline std::pair<DamgPtr, std::vector<Rational>> project_graph_weights(
    const DamgPtr& g, const std::vector<Rational>& per_edge, const std::string& z,
    std::size_t cap = 1000000) {
    auto comp = detail::compose_without(*g, g->index_of(z), cap);
    DamgPtr projected = build_damg(comp.vertices, comp.edges);
    std::vector<Rational> weights(comp.edges.size());
    for (std::size_t i = 0; i < comp.edges.size(); ++i) {
        auto [e1, e2] = comp.sources[i];
        Rational w = (e2 < 0) ? per_edge[e1] : per_edge[e1] * per_edge[e2];
        weights[projected->edge_index(comp.edges[i].id)] = std::move(w);
    }
    return {projected, std::move(weights)};
}

inline std::pair<DamgPtr, EdgeWeights> project_edge_weights(const DamgPtr& g,
                                                            const EdgeWeights& sigma,
                                                            const std::set<std::string>& S,
                                                            std::size_t cap = 1000000) {
    DamgPtr cur = g;
    std::vector<Rational> wts = sigma.per_edge();
    for (const auto& z : detail::removal_order(*g, S))
        std::tie(cur, wts) = project_graph_weights(cur, wts, z, cap);
    return {cur, EdgeWeights(cur, std::move(wts))};
}

inline std::pair<DamgPtr, ProjectionKernel> project_kernel(const DamgPtr& g,
                                                           const ProjectionKernel& q,
                                                           const std::set<std::string>& S,
                                                           std::size_t cap = 1000000) {
    DamgPtr cur = g;
    std::vector<Rational> wts = q.per_edge();
    for (const auto& z : detail::removal_order(*g, S))
        std::tie(cur, wts) = project_graph_weights(cur, wts, z, cap);
    std::string prov = q.provenance();
    if (!S.empty()) prov += " (projected)";
    return {cur, ProjectionKernel(cur, std::move(wts), std::move(prov))};
}

/// Result of projecting onto the complement of `removed`: the multigraph,
/// the projected kernel, the re-attributed synergy, and the value function
/// recovered from it by inverse Moebius transform.
template <RationalModule A>
struct ProjectionResult {
    DamgPtr graph;
    ProjectionKernel kernel;
    ValueFunction<A> synergy;
    ValueFunction<A> value;
    std::set<std::string> removed;
};

namespace detail {

template <RationalModule A>
ProjectionResult<A> project_impl(const DamgPtr& g, const ProjectionKernel& q,
                                 const ValueFunction<A>& w, const std::set<std::string>& S,
                                 std::size_t cap) {
    for (const auto& z : S) g->index_of(z);  // validate up front
    DamgPtr cur = g;
    std::vector<Rational> qvec = q.per_edge();
    std::map<std::string, A> syn;
    for (int v = 0; v < g->size(); ++v) syn.emplace(g->label(v), w.value(v));
    for (const auto& zlabel : removal_order(*g, S)) {
        const int z = cur->index_of(zlabel);
        // w(x) += q(x|z) * w(z) for parents x, then drop z.
        const A& wz = syn.at(zlabel);
        for (int x : cur->parents(z)) {
            Rational qxz(0);
            for (int e : cur->in_edges(z))
                if (cur->edge(e).tail == x) qxz += qvec[e];
            A& wx = syn.at(cur->label(x));
            wx = wx + scale(qxz, wz);
        }
        syn.erase(zlabel);
        std::tie(cur, qvec) = project_graph_weights(cur, qvec, zlabel, cap);
    }
    std::string prov = q.provenance();
    if (!S.empty()) prov += " (projected)";
    ProjectionKernel qout(cur, std::move(qvec), std::move(prov));
    ValueFunction<A> wout(cur, syn);
    ValueFunction<A> vout = inverse_moebius(wout);
    return ProjectionResult<A>{cur, std::move(qout), std::move(wout), std::move(vout), S};
}

}  // namespace detail

/// Projects out one vertex; `w` is the synergy function of the game.
template <RationalModule A>
ProjectionResult<A> project_vertex(const DamgPtr& g, const ProjectionKernel& q,
                                   const ValueFunction<A>& w, const std::string& z,
                                   std::size_t cap = 1000000) {
    return detail::project_impl(g, q, w, std::set<std::string>{z}, cap);
}

/// Projects out a subset; equals any sequential composition of single-vertex
/// projections (projections commute).
template <RationalModule A>
ProjectionResult<A> project_subset(const DamgPtr& g, const ProjectionKernel& q,
                                   const ValueFunction<A>& w, const std::set<std::string>& S,
                                   std::size_t cap = 1000000) {
    return detail::project_impl(g, q, w, S, cap);
}

/// Projects onto a subset: removes the complement of T.
template <RationalModule A>
ProjectionResult<A> project_onto(const DamgPtr& g, const ProjectionKernel& q,
                                 const ValueFunction<A>& w, const std::set<std::string>& T,
                                 std::size_t cap = 1000000) {
    std::set<std::string> S;
    for (int v = 0; v < g->size(); ++v)
        if (!T.count(g->label(v))) S.insert(g->label(v));
    for (const auto& t : T) g->index_of(t);
    return detail::project_impl(g, q, w, S, cap);
}

/// Admissibility of a projection set S: with T = S \ Rt and U = S inter Rt,
/// every vertex of G^{\T} whose parent set meets U has all parents in U.
inline bool is_admissible(const DamgPtr& g, const std::set<std::string>& S) {
    std::set<std::string> T, U;
    for (const auto& z : S) {
        if (g->is_root(g->index_of(z)))
            U.insert(z);
        else
            T.insert(z);
    }
    DamgPtr cur = g;
    if (!T.empty()) {
        std::vector<Rational> dummy(g->edges().size(), Rational(0));
        for (const auto& z : detail::removal_order(*g, T))
            std::tie(cur, dummy) = project_graph_weights(cur, dummy, z);
    }
    for (int y = 0; y < cur->size(); ++y) {
        bool meets = false, inside = true;
        for (int p : cur->parents(y)) {
            if (U.count(cur->label(p)))
                meets = true;
            else
                inside = false;
        }
        if (meets && !inside) return false;
    }
    return true;
}

/// Restricted admissibility additionally forbids S from containing a full
/// root-to-leaf directed path.
inline bool is_restricted_admissible(const DamgPtr& g, const std::set<std::string>& S) {
    if (!is_admissible(g, S)) return false;
    std::vector<bool> reach(g->size(), false);
    for (int v = 0; v < g->size(); ++v) {
        if (!S.count(g->label(v))) continue;
        if (g->is_root(v)) {
            reach[v] = true;
        } else {
            for (int p : g->parents(v)) reach[v] = reach[v] || reach[p];
        }
        if (reach[v] && g->is_leaf(v)) return false;
    }
    return true;
}

/// Vertices with vanishing synergy.
template <ModuleValue A>
std::set<std::string> weak_elements(const ValueFunction<A>& v) {
    auto w = moebius_transform(v);
    std::set<std::string> out;
    const A zero = v.zero();
    for (int x = 0; x < v.base()->size(); ++x)
        if (w.value(x) == zero) out.insert(v.base()->label(x));
    return out;
}

/// Vertices all of whose descendants are weak. Always a subset of the weak
/// elements.
template <ModuleValue A>
std::set<std::string> null_elements(const ValueFunction<A>& v) {
    const Damg& g = *v.base();
    auto w = moebius_transform(v);
    const A zero = v.zero();
    Bitset weak(g.size());
    for (int x = 0; x < g.size(); ++x)
        if (w.value(x) == zero) weak.set(x);
    std::set<std::string> out;
    for (int x = 0; x < g.size(); ++x)
        if (g.descendants(x).is_subset_of(weak)) out.insert(g.label(x));
    return out;
}

template <RationalModule A>
struct DropWeakResult {
    DamgPtr graph;
    ProjectionKernel kernel;
    ValueFunction<A> value;  // restriction of the original value function
};

/// Removes weak non-root elements: the graph and kernel are projected, the
/// value function is restricted (projection and restriction agree on weak
/// sets). `v` is the value function, not its synergy.
template <RationalModule A>
DropWeakResult<A> drop_weak(const DamgPtr& g, const ProjectionKernel& q,
                            const ValueFunction<A>& v, const std::set<std::string>& W,
                            std::size_t cap = 1000000) {
    auto w = moebius_transform(v);
    const A zero = v.zero();
    for (const auto& z : W) {
        int zi = g->index_of(z);
        if (g->is_root(zi)) throw NotWeakError(z, "is a root; only non-roots may be dropped");
        if (!(w.value(zi) == zero)) throw NotWeakError(z, "is not weak (nonzero synergy)");
    }
    auto [projected, qout] = project_kernel(g, q, W, cap);
    std::map<std::string, A> vals;
    for (int x = 0; x < projected->size(); ++x)
        vals.emplace(projected->label(x), v.value(projected->label(x)));
    return DropWeakResult<A>{projected, std::move(qout), ValueFunction<A>(projected, vals)};
}

}  // namespace damg
