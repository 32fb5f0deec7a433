#pragma once

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "damg/errors.hpp"
#include "damg/rational.hpp"

namespace damg {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

/// Directed edge between two vertices, given by topological indices.
/// Parallel edges (same tail/head, different id) are permitted.
struct Edge {
    std::string id;
    int tail = -1;
    int head = -1;
};

/// A finite directed acyclic multigraph with a certified topological order.
///
/// Vertices are addressed by their position in the topological order
/// (Kahn's algorithm with lexicographic-by-label tie-breaking, so layouts
/// are reproducible across runs). Immutable after construction; safe to
/// read concurrently.
class Damg {
  public:
    struct EdgeSpec {
        std::string id, tail, head;
    };

    static Damg build(const std::vector<std::string>& vertices,
                      const std::vector<EdgeSpec>& edges) {
        return Damg(vertices, edges);
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int v) const { return labels_.at(v); }

    bool has_vertex(const std::string& label) const { return index_.count(label) != 0; }
    int index_of(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw UnknownVertexError(label);
        return it->second;
    }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_.at(e); }
    int edge_index(const std::string& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end()) throw InvalidIdError("unknown edge id: " + id);
        return it->second;
    }
    bool has_edge_id(const std::string& id) const { return edge_index_.count(id) != 0; }

    const std::vector<int>& in_edges(int v) const { return in_edges_.at(v); }
    const std::vector<int>& out_edges(int v) const { return out_edges_.at(v); }
    const std::vector<int>& parents(int v) const { return parents_.at(v); }
    const std::vector<int>& children(int v) const { return children_.at(v); }

    /// Edge indices of E(x,y); empty when there is no edge.
    std::vector<int> edges_between(int x, int y) const {
        std::vector<int> out;
        for (int e : in_edges_.at(y))
            if (edges_[e].tail == x) out.push_back(e);
        return out;
    }
    int multiplicity(int x, int y) const {
        int m = 0;
        for (int e : in_edges_.at(y))
            if (edges_[e].tail == x) ++m;
        return m;
    }

    const std::vector<int>& roots() const { return roots_; }
    const std::vector<int>& leaves() const { return leaves_; }
    bool is_root(int v) const { return parents_.at(v).empty(); }
    bool is_leaf(int v) const { return children_.at(v).empty(); }

    /// Ancestor set of v, self included.
    const Bitset& ancestors(int v) const { return anc_.at(v); }
    /// Descendant set of v, self included.
    const Bitset& descendants(int v) const { return desc_.at(v); }
    bool is_ancestor(int x, int y) const { return anc_.at(y).test(x); }

    friend bool operator==(const Damg& a, const Damg& b) {
        if (a.labels_ != b.labels_) return false;
        if (a.edges_.size() != b.edges_.size()) return false;
        auto key = [](const Damg& g) {
            std::vector<std::tuple<std::string, int, int>> k;
            k.reserve(g.edges_.size());
            for (const auto& e : g.edges_) k.emplace_back(e.id, e.tail, e.head);
            std::sort(k.begin(), k.end());
            return k;
        };
        return key(a) == key(b);
    }

  private:
    Damg(const std::vector<std::string>& vertices, const std::vector<EdgeSpec>& specs) {
        std::map<std::string, int> decl;
        for (const auto& v : vertices) {
            if (decl.count(v)) throw DuplicateIdError(v);
            decl.emplace(v, static_cast<int>(decl.size()));
        }
        const int n = static_cast<int>(vertices.size());

        std::set<std::string> ids;
        for (const auto& s : specs) {
            // '*' is the composition separator; it may only join non-empty
            // parts (as in projected ids like "e1*e2"), never stand alone.
            if (s.id.empty() || s.id.front() == '*' || s.id.back() == '*' ||
                s.id.find("**") != std::string::npos)
                throw InvalidIdError("malformed edge id: '" + s.id + "'");
            if (!ids.insert(s.id).second) throw DuplicateIdError(s.id);
            if (!decl.count(s.tail)) throw DanglingEndpointError(s.id, s.tail);
            if (!decl.count(s.head)) throw DanglingEndpointError(s.id, s.head);
            if (s.tail == s.head) throw CycleError({s.tail});
        }

        // Kahn with a min-heap keyed on label.
        std::vector<int> indeg(n, 0);
        std::vector<std::vector<int>> succ(n);
        for (const auto& s : specs) {
            ++indeg[decl[s.head]];
            succ[decl[s.tail]].push_back(decl[s.head]);
        }
        auto cmp = [&](int a, int b) { return vertices[a] > vertices[b]; };
        std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
        for (int v = 0; v < n; ++v)
            if (indeg[v] == 0) ready.push(v);
        std::vector<int> order;
        order.reserve(n);
        std::vector<int> indeg_work = indeg;
        while (!ready.empty()) {
            int v = ready.top();
            ready.pop();
            order.push_back(v);
            for (int c : succ[v])
                if (--indeg_work[c] == 0) ready.push(c);
        }
        if (static_cast<int>(order.size()) != n) throw CycleError(find_cycle(vertices, specs, decl, indeg_work));

        std::vector<int> pos(n);
        labels_.resize(n);
        for (int i = 0; i < n; ++i) {
            pos[order[i]] = i;
            labels_[i] = vertices[order[i]];
            index_.emplace(labels_[i], i);
        }

        // Canonical edge order (by id): structurally equal graphs index
        // their edges identically regardless of declaration order.
        std::vector<EdgeSpec> ordered = specs;
        std::sort(ordered.begin(), ordered.end(),
                  [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
        edges_.reserve(ordered.size());
        in_edges_.assign(n, {});
        out_edges_.assign(n, {});
        for (const auto& s : ordered) {
            Edge e{s.id, pos[decl[s.tail]], pos[decl[s.head]]};
            edge_index_.emplace(e.id, static_cast<int>(edges_.size()));
            edges_.push_back(std::move(e));
        }
        // Deterministic traversal order: sort incidence lists by (endpoint, id).
        for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
            in_edges_[edges_[i].head].push_back(i);
            out_edges_[edges_[i].tail].push_back(i);
        }
        for (int v = 0; v < n; ++v) {
            auto by_tail = [&](int a, int b) {
                return std::tie(edges_[a].tail, edges_[a].id) < std::tie(edges_[b].tail, edges_[b].id);
            };
            auto by_head = [&](int a, int b) {
                return std::tie(edges_[a].head, edges_[a].id) < std::tie(edges_[b].head, edges_[b].id);
            };
            std::sort(in_edges_[v].begin(), in_edges_[v].end(), by_tail);
            std::sort(out_edges_[v].begin(), out_edges_[v].end(), by_head);
        }

        parents_.assign(n, {});
        children_.assign(n, {});
        for (int v = 0; v < n; ++v) {
            int last = -1;
            for (int e : in_edges_[v])
                if (edges_[e].tail != last) parents_[v].push_back(last = edges_[e].tail);
            last = -1;
            for (int e : out_edges_[v])
                if (edges_[e].head != last) children_[v].push_back(last = edges_[e].head);
        }
        for (int v = 0; v < n; ++v) {
            if (parents_[v].empty()) roots_.push_back(v);
            if (children_[v].empty()) leaves_.push_back(v);
        }

        anc_.assign(n, Bitset(n));
        for (int v = 0; v < n; ++v) {
            for (int p : parents_[v]) anc_[v] |= anc_[p];
            anc_[v].set(v);
        }
        desc_.assign(n, Bitset(n));
        for (int v = n - 1; v >= 0; --v) {
            for (int c : children_[v]) desc_[v] |= desc_[c];
            desc_[v].set(v);
        }
    }

    static std::vector<std::string> find_cycle(const std::vector<std::string>& vertices,
                                               const std::vector<EdgeSpec>& specs,
                                               std::map<std::string, int>& decl,
                                               const std::vector<int>& indeg_residual) {
        // Residual vertices (indeg > 0 after Kahn) all lie on or below a cycle;
        // walking parents inside the residual set must revisit a vertex.
        const int n = static_cast<int>(vertices.size());
        std::vector<std::vector<int>> pred(n);
        for (const auto& s : specs) pred[decl[s.head]].push_back(decl[s.tail]);
        int start = -1;
        for (int v = 0; v < n; ++v)
            if (indeg_residual[v] > 0) start = v;
        std::vector<int> seen(n, -1);
        std::vector<int> walk;
        int cur = start;
        while (seen[cur] == -1) {
            seen[cur] = static_cast<int>(walk.size());
            walk.push_back(cur);
            int next = -1;
            for (int p : pred[cur])
                if (indeg_residual[p] > 0) next = p;
            cur = next;
        }
        std::vector<std::string> cycle;
        for (int i = static_cast<int>(walk.size()) - 1; i >= seen[cur]; --i)
            cycle.push_back(vertices[walk[i]]);  // reversed walk follows edge direction
        return cycle;
    }

    std::vector<std::string> labels_;
    std::map<std::string, int> index_;
    std::vector<Edge> edges_;
    std::map<std::string, int> edge_index_;
    std::vector<std::vector<int>> in_edges_, out_edges_;
    std::vector<std::vector<int>> parents_, children_;
    std::vector<int> roots_, leaves_;
    std::vector<Bitset> anc_, desc_;
};

using DamgPtr = std::shared_ptr<const Damg>;

inline DamgPtr build_damg(const std::vector<std::string>& vertices,
                          const std::vector<Damg::EdgeSpec>& edges) {
    return std::make_shared<const Damg>(Damg::build(vertices, edges));
}

inline std::vector<std::string> labels_of(const Damg& g, const Bitset& bits) {
    std::vector<std::string> out;
    for (auto v = bits.find_first(); v != Bitset::npos; v = bits.find_next(v))
        out.push_back(g.label(static_cast<int>(v)));
    return out;
}

/// Parents, children, ancestors and descendants of one vertex, as labels in
/// topological order. Ancestors/descendants include the vertex itself.
struct Relations {
    std::vector<std::string> parents, children, ancestors, descendants;
};

inline Relations relations(const Damg& g, const std::string& vertex) {
    int v = g.index_of(vertex);
    Relations r;
    for (int p : g.parents(v)) r.parents.push_back(g.label(p));
    for (int c : g.children(v)) r.children.push_back(g.label(c));
    r.ancestors = labels_of(g, g.ancestors(v));
    r.descendants = labels_of(g, g.descendants(v));
    return r;
}

/// pi(x, y) for one fixed x, by the parent recursion, as exact integers.
inline std::vector<Rational> path_count_row(const Damg& g, int x) {
    std::vector<Rational> row(g.size(), Rational(0));
    row[x] = 1;
    const auto& desc = g.descendants(x);
    for (auto y = desc.find_next(x); y != Bitset::npos; y = desc.find_next(y)) {
        Rational acc(0);
        for (int p : g.parents(static_cast<int>(y)))
            if (desc.test(p)) acc += row[p] * g.multiplicity(p, static_cast<int>(y));
        row[y] = acc;
    }
    return row;
}

/// pi(y) = sum over roots of pi(r, y), by the aggregate recursion.
inline std::vector<Rational> path_count_totals(const Damg& g) {
    std::vector<Rational> pi(g.size(), Rational(0));
    for (int v = 0; v < g.size(); ++v) {
        if (g.is_root(v)) {
            pi[v] = 1;
            continue;
        }
        for (int p : g.parents(v)) pi[v] += pi[p] * g.multiplicity(p, v);
    }
    return pi;
}

/// All directed paths from `from` to `to` as edge-id sequences (the trivial
/// path is the empty sequence). Throws CapExceededError if there are more
/// than `cap` paths.
inline std::vector<std::vector<std::string>> enumerate_paths(const Damg& g,
                                                             const std::string& from,
                                                             const std::string& to,
                                                             std::size_t cap = 100000) {
    int x = g.index_of(from), y = g.index_of(to);
    auto row = path_count_row(g, x);
    if (row[y] > Rational(BigInt(cap)))
        throw CapExceededError("path count " + to_string(row[y]) + " exceeds cap " +
                               std::to_string(cap));
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> cur;
    auto dfs = [&](auto&& self, int v) -> void {
        if (v == y) {
            out.push_back(cur);
            return;
        }
        for (int e : g.out_edges(v)) {
            if (!g.ancestors(y).test(g.edge(e).head)) continue;
            cur.push_back(g.edge(e).id);
            self(self, g.edge(e).head);
            cur.pop_back();
        }
    };
    if (g.descendants(x).test(y)) dfs(dfs, x);
    return out;
}

/// True iff every root-to-leaf directed path meets X exactly once.
/// Two DP passes (min and max X-hit counts along paths), no enumeration.
inline bool is_horizontal_subset(const Damg& g, const std::set<std::string>& X) {
    const int n = g.size();
    Bitset in_x(n);
    for (const auto& label : X) in_x.set(g.index_of(label));
    std::vector<int> min_hits(n, 0), max_hits(n, 0);
    for (int v = 0; v < n; ++v) {
        int lo = 0, hi = 0;
        if (!g.is_root(v)) {
            lo = n + 1;
            hi = -1;
            for (int p : g.parents(v)) {
                lo = std::min(lo, min_hits[p]);
                hi = std::max(hi, max_hits[p]);
            }
        }
        int self = in_x.test(v) ? 1 : 0;
        min_hits[v] = lo + self;
        max_hits[v] = hi + self;
    }
    for (int l : g.leaves())
        if (min_hits[l] != 1 || max_hits[l] != 1) return false;
    return true;
}

}  // namespace damg
