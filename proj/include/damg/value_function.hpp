#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "damg/graph.hpp"
#include "damg/module.hpp"

namespace damg {

/// Module-valued function on the vertices of a DAMG (a "game"), indexed by
/// topological position. All values share one shape (scalar, or vectors of
/// one declared dimension). Immutable after construction.
template <ModuleValue A>
class ValueFunction {
  public:
    ValueFunction(DamgPtr base, std::vector<A> values)
        : base_(std::move(base)), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != base_->size())
            throw Error("value function must be total on the vertex set");
        check_shape();
    }

    ValueFunction(DamgPtr base, const std::map<std::string, A>& by_label)
        : base_(std::move(base)) {
        for (const auto& [label, _] : by_label)
            if (!base_->has_vertex(label)) throw UnknownVertexError(label);
        values_.reserve(base_->size());
        for (int v = 0; v < base_->size(); ++v) {
            auto it = by_label.find(base_->label(v));
            if (it == by_label.end())
                throw Error("value function must be total; missing " + base_->label(v));
            values_.push_back(it->second);
        }
        check_shape();
    }

    const DamgPtr& base() const { return base_; }
    const std::vector<A>& values() const { return values_; }
    const A& value(int v) const { return values_.at(v); }
    const A& value(const std::string& label) const { return values_.at(base_->index_of(label)); }

    /// Zero of the same shape as this function's values.
    A zero() const { return values_.empty() ? A{} : zero_like(values_.front()); }

    A total() const {
        A acc = zero();
        for (const auto& v : values_) acc = acc + v;
        return acc;
    }

    friend bool operator==(const ValueFunction& a, const ValueFunction& b) {
        return *a.base_ == *b.base_ && a.values_ == b.values_;
    }

  private:
    void check_shape() const {
        if constexpr (requires(const A& a) { a.dim(); }) {
            for (const auto& v : values_)
                if (v.dim() != values_.front().dim())
                    throw DimensionMismatchError(values_.front().dim(), v.dim());
        }
    }

    DamgPtr base_;
    std::vector<A> values_;
};

namespace detail {

// Seeds the ancestor sum with v(p*) for the heaviest parent p*: once the
// first k synergies are fixed, sum_{y in Anc(p)} w(y) = v(p) holds for every
// processed p, so only ancestors outside Anc(p*) are added bit by bit.
template <ModuleValue A>
A proper_ancestor_sum(const Damg& g, int x, int heaviest_parent,
                      const std::vector<A>& w, const std::vector<A>& v) {
    A acc = v[heaviest_parent];
    Bitset diff = g.ancestors(x);
    diff.reset(x);
    diff -= g.ancestors(heaviest_parent);
    for (auto y = diff.find_first(); y != Bitset::npos; y = diff.find_next(y))
        acc = acc + w[y];
    return acc;
}

inline int heaviest_parent(const Damg& g, int x) {
    int best = -1;
    std::size_t best_count = 0;
    for (int p : g.parents(x)) {
        std::size_t c = g.ancestors(p).count();
        if (best < 0 || c > best_count) {
            best = p;
            best_count = c;
        }
    }
    return best;
}

}  // namespace detail

/// Moebius transform (synergy function): w(x) = v(x) - sum of w over the
/// proper ancestors of x, evaluated along the topological order.
template <ModuleValue A>
ValueFunction<A> moebius_transform(const ValueFunction<A>& vf) {
    const Damg& g = *vf.base();
    const auto& v = vf.values();
    std::vector<A> w;
    w.reserve(g.size());
    for (int x = 0; x < g.size(); ++x) {
        if (g.is_root(x)) {
            w.push_back(v[x]);
            continue;
        }
        A acc = detail::proper_ancestor_sum(g, x, detail::heaviest_parent(g, x), w, v);
        w.push_back(v[x] - acc);
    }
    return ValueFunction<A>(vf.base(), std::move(w));
}

/// Inverse Moebius transform: v(x) = sum of w over all ancestors of x.
template <ModuleValue A>
ValueFunction<A> inverse_moebius(const ValueFunction<A>& wf) {
    const Damg& g = *wf.base();
    const auto& w = wf.values();
    std::vector<A> v;
    v.reserve(g.size());
    for (int x = 0; x < g.size(); ++x) {
        if (g.is_root(x)) {
            v.push_back(w[x]);
            continue;
        }
        A acc = detail::proper_ancestor_sum(g, x, detail::heaviest_parent(g, x), w, v);
        v.push_back(w[x] + acc);
    }
    return ValueFunction<A>(wf.base(), std::move(v));
}

/// Unanimity game centred at y: the indicator of Desc(y). Its Moebius
/// transform is the delta at y.
inline ValueFunction<Rational> unanimity(const DamgPtr& g, const std::string& centre) {
    int y = g->index_of(centre);
    std::vector<Rational> vals(g->size(), Rational(0));
    const auto& d = g->descendants(y);
    for (auto x = d.find_first(); x != Bitset::npos; x = d.find_next(x)) vals[x] = 1;
    return ValueFunction<Rational>(g, std::move(vals));
}

/// Restriction to an ancestrally closed subset: keeps all edges among the
/// subset. The synergy of the restriction equals the restricted synergy.
template <ModuleValue A>
std::pair<DamgPtr, ValueFunction<A>> restrict_to_ancestrally_closed(
    const ValueFunction<A>& vf, const std::set<std::string>& subset) {
    const Damg& g = *vf.base();
    Bitset keep(g.size());
    for (const auto& label : subset) keep.set(g.index_of(label));
    for (auto v = keep.find_first(); v != Bitset::npos; v = keep.find_next(v)) {
        Bitset missing = g.ancestors(static_cast<int>(v)) - keep;
        if (missing.any())
            throw NotAncestrallyClosedError(g.label(static_cast<int>(missing.find_first())));
    }
    std::vector<std::string> verts;
    std::vector<Damg::EdgeSpec> edges;
    std::vector<A> vals;
    for (auto v = keep.find_first(); v != Bitset::npos; v = keep.find_next(v)) {
        verts.push_back(g.label(static_cast<int>(v)));
        vals.push_back(vf.value(static_cast<int>(v)));
    }
    for (const auto& e : g.edges())
        if (keep.test(e.tail) && keep.test(e.head))
            edges.push_back({e.id, g.label(e.tail), g.label(e.head)});
    DamgPtr sub = build_damg(verts, edges);
    // verts were collected in the parent's topological order, which the
    // subgraph's own ordering may permute; remap through labels.
    std::vector<A> ordered;
    ordered.reserve(vals.size());
    for (int v = 0; v < sub->size(); ++v) {
        auto it = std::find(verts.begin(), verts.end(), sub->label(v));
        ordered.push_back(vals[static_cast<std::size_t>(it - verts.begin())]);
    }
    return {sub, ValueFunction<A>(sub, std::move(ordered))};
}

}  // namespace damg
