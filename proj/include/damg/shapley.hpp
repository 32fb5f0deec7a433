#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "damg/graph.hpp"
#include "damg/module.hpp"
#include "damg/projection.hpp"
#include "damg/value_function.hpp"
#include "damg/weights.hpp"

namespace damg {

/// Per-root attribution, with the engine and kernel that produced it.
/// Keys are exactly the roots of the base graph.
template <RationalModule A>
struct Attribution {
    DamgPtr base;
    std::map<std::string, A> per_root;
    std::string engine;
    std::string kernel_provenance;

    const A& at(const std::string& root) const {
        auto it = per_root.find(root);
        if (it == per_root.end()) throw UnknownVertexError(root);
        return it->second;
    }

    A total(const A& zero) const {
        A acc = zero;
        for (const auto& [_, a] : per_root) acc = acc + a;
        return acc;
    }
};

/// Sh_r(v) = sum_y s(r|y) w(y), with s the total path weights of (G, q).
template <RationalModule A>
Attribution<A> shapley_total_weights(const DamgPtr& g, const ProjectionKernel& q,
                                     const ValueFunction<A>& v,
                                     const PathAlgebraElement* precomputed_s = nullptr) {
    if (!q.normalized()) throw KernelNotNormalizedError();
    if (precomputed_s && !(*precomputed_s->base() == *g)) throw BaseMismatchError();
    auto w = moebius_transform(v);
    PathAlgebraElement s = precomputed_s ? *precomputed_s : kernel_total_weights(g, q);
    Attribution<A> out{g, {}, "total-weights", q.provenance()};
    for (int r : g->roots()) {
        A acc = v.zero();
        const auto& reach = g->descendants(r);
        for (auto y = reach.find_first(); y != Bitset::npos; y = reach.find_next(y))
            acc = acc + scale(s.at(r, static_cast<int>(y)), w.value(static_cast<int>(y)));
        out.per_root.emplace(g->label(r), std::move(acc));
    }
    return out;
}

/// Recursive-projection engine: peels vertices off in reverse topological
/// order, re-attributing each synergy to its parents. O(D^2) time, O(D)
/// working memory; no total-path-weight matrix is formed.
template <RationalModule A>
Attribution<A> shapley_recursive(const DamgPtr& g, const ProjectionKernel& q,
                                 const ValueFunction<A>& v) {
    if (!q.normalized()) throw KernelNotNormalizedError();
    auto wf = moebius_transform(v);
    std::vector<A> w = wf.values();
    for (int z = g->size() - 1; z >= 0; --z) {
        if (g->is_root(z)) continue;
        // Later vertices are already peeled off, so z is a leaf of the
        // remaining graph and its parents and weights are the original ones.
        for (int x : g->parents(z)) {
            Rational qxz(0);
            for (int e : g->in_edges(z))
                if (g->edge(e).tail == x) qxz += q.at_edge(e);
            w[x] = w[x] + scale(qxz, w[z]);
        }
    }
    Attribution<A> out{g, {}, "recursive-projection", q.provenance()};
    for (int r : g->roots()) out.per_root.emplace(g->label(r), w[r]);
    return out;
}

/// Closed form for the path uniform weighting:
/// Sh_r(v) = sum_y pi(r,y)/pi(y) w(y), without building the kernel.
template <RationalModule A>
Attribution<A> shapley_path_uniform(const DamgPtr& g, const ValueFunction<A>& v) {
    auto w = moebius_transform(v);
    auto pi = path_count_totals(*g);
    Attribution<A> out{g, {}, "path-uniform", "path-uniform"};
    for (int r : g->roots()) {
        auto row = path_count_row(*g, r);
        A acc = v.zero();
        const auto& reach = g->descendants(r);
        for (auto y = reach.find_first(); y != Bitset::npos; y = reach.find_next(y))
            acc = acc + scale(row[y] / pi[y], w.value(static_cast<int>(y)));
        out.per_root.emplace(g->label(r), std::move(acc));
    }
    return out;
}

/// Explicit formula for edge and root weighted graphs:
/// Sh_r(v) = sum_y tau(r)/tau(y) sigma(r,y) w(y).
template <RationalModule A>
Attribution<A> shapley_weighted(const DamgPtr& g, const EdgeWeights& sigma,
                                const RootWeights& tau, const ValueFunction<A>& v) {
    auto strengths = extend_root_weights(g, sigma, tau);
    for (int y = 0; y < g->size(); ++y)
        if (strengths[y] == 0) throw ZeroStrengthError(g->label(y));
    auto w = moebius_transform(v);
    Attribution<A> out{g, {}, "weighted", "induced"};
    for (int r : g->roots()) {
        auto row = detail::total_weights_row(*g, sigma.per_edge(), r);
        A acc = v.zero();
        const auto& reach = g->descendants(r);
        for (auto y = reach.find_first(); y != Bitset::npos; y = reach.find_next(y))
            acc = acc + scale(strengths[r] / strengths[y] * row[y],
                              w.value(static_cast<int>(y)));
        out.per_root.emplace(g->label(r), std::move(acc));
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_members(const std::string& label) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : label) {
        if (c == '|') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

/// Classic Shapley value on the power-set DAG, as an independent oracle:
/// evaluates both the synergy form sum_{i in y} w(y)/|y| (with w computed by
/// subset inclusion-exclusion, not by this library's transform) and the
/// permutation-average marginal-contribution form, and insists they agree.
template <RationalModule A>
Attribution<A> classic_shapley_oracle(const ValueFunction<A>& v) {
    const Damg& g = *v.base();
    const std::size_t n = g.roots().size();
    if (n > 10) throw TooManyPlayersError(n);
    if (g.size() != (1 << n) - 1)
        throw Error("classic oracle expects the full power-set DAG");
    std::vector<std::string> players;
    for (int r : g.roots()) players.push_back(g.label(r));
    std::sort(players.begin(), players.end());
    std::map<std::string, unsigned> player_bit;
    for (std::size_t i = 0; i < n; ++i) player_bit[players[i]] = 1u << i;
    // Vertex value by subset mask.
    std::vector<A> by_mask(1u << n, v.zero());
    for (int x = 0; x < g.size(); ++x) {
        unsigned mask = 0;
        for (const auto& m : detail::split_members(g.label(x))) {
            auto it = player_bit.find(m);
            if (it == player_bit.end())
                throw Error("classic oracle expects subset-of-players labels, got " + g.label(x));
            mask |= it->second;
        }
        by_mask[mask] = v.value(x);
    }

    // Synergy form via inclusion-exclusion over subsets.
    std::vector<A> w_mask(1u << n, v.zero());
    for (unsigned y = 1; y < (1u << n); ++y) {
        A acc = v.zero();
        for (unsigned z = y;; z = (z - 1) & y) {
            if (z != 0) {
                int diff = __builtin_popcount(y) - __builtin_popcount(z);
                acc = (diff % 2 == 0) ? acc + by_mask[z] : acc - by_mask[z];
            }
            if (z == 0) break;
        }
        w_mask[y] = std::move(acc);
    }
    std::vector<A> synergy_form(n, v.zero());
    for (unsigned y = 1; y < (1u << n); ++y) {
        Rational coeff(1, __builtin_popcount(y));
        for (std::size_t i = 0; i < n; ++i)
            if (y & (1u << i)) synergy_form[i] = synergy_form[i] + scale(coeff, w_mask[y]);
    }

    // Permutation-average form.
    std::vector<A> perm_sum(n, v.zero());
    std::vector<unsigned> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Rational factorial(1);
    for (std::size_t k = 2; k <= n; ++k) factorial *= static_cast<int>(k);
    do {
        unsigned mask = 0;
        for (unsigned idx : order) {
            unsigned next = mask | (1u << idx);
            A marginal = (mask == 0) ? by_mask[next] : by_mask[next] - by_mask[mask];
            perm_sum[idx] = perm_sum[idx] + marginal;
            mask = next;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    Rational inv_fact = Rational(1) / factorial;
    for (auto& a : perm_sum) a = scale(inv_fact, a);

    for (std::size_t i = 0; i < n; ++i)
        if (!(synergy_form[i] == perm_sum[i]))
            throw Error("classic oracle self-check failed: synergy and permutation forms differ");

    Attribution<A> out{v.base(), {}, "classic-oracle", "none"};
    for (std::size_t i = 0; i < n; ++i) out.per_root.emplace(players[i], synergy_form[i]);
    return out;
}

/// Average marginal contribution across maximal chains, after adjoining a
/// virtual bottom with value zero. A regression target from the lattice
/// literature; diverges from the path-uniform Shapley values in general.
template <RationalModule A>
Attribution<A> chain_shapley_comparator(const DamgPtr& g, const ValueFunction<A>& v,
                                        std::size_t cap = 100000) {
    const Damg& graph = *g;
    const auto& roots = graph.roots();
    // Coalition of a vertex: the roots among its ancestors.
    std::vector<Bitset> coalition(graph.size(), Bitset(roots.size()));
    for (int x = 0; x < graph.size(); ++x)
        for (std::size_t ri = 0; ri < roots.size(); ++ri)
            if (graph.ancestors(x).test(roots[ri])) coalition[x].set(ri);

    // Enumerate maximal chains: root-to-leaf directed paths (vertex lists).
    std::vector<std::vector<int>> chains;
    std::vector<int> cur;
    auto dfs = [&](auto&& self, int x) -> void {
        cur.push_back(x);
        if (graph.is_leaf(x)) {
            if (chains.size() >= cap) throw ChainExplosionError(cap);
            chains.push_back(cur);
        } else {
            for (int e : graph.out_edges(x)) self(self, graph.edge(e).head);
        }
        cur.pop_back();
    };
    for (int r : roots) dfs(dfs, r);

    std::vector<A> acc(roots.size(), v.zero());
    for (const auto& chain : chains) {
        for (std::size_t ri = 0; ri < roots.size(); ++ri) {
            // First chain element whose coalition contains root ri; its
            // predecessor is the virtual bottom when it is the chain's head.
            int s = -1, t = -1;
            for (std::size_t k = 0; k < chain.size(); ++k) {
                if (coalition[chain[k]].test(ri)) {
                    s = chain[k];
                    if (k > 0) t = chain[k - 1];
                    break;
                }
            }
            if (s < 0) continue;
            std::size_t gained =
                t < 0 ? coalition[s].count() : (coalition[s] - coalition[t]).count();
            A marginal = t < 0 ? v.value(s) : v.value(s) - v.value(t);
            acc[ri] = acc[ri] + scale(Rational(1, static_cast<long long>(gained)), marginal);
        }
    }
    Rational inv_chains = Rational(1, static_cast<long long>(chains.size()));
    Attribution<A> out{g, {}, "chain-comparator", "maximal-chains"};
    for (std::size_t ri = 0; ri < roots.size(); ++ri)
        out.per_root.emplace(graph.label(roots[ri]), scale(inv_chains, acc[ri]));
    return out;
}

}  // namespace damg
