#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "damg/graph.hpp"
#include "damg/value_function.hpp"

namespace damg {

/// Finite poset given by its elements and covering pairs (lower, upper).
struct PosetSpec {
    std::vector<std::string> elements;
    std::vector<std::pair<std::string, std::string>> cover_pairs;
};

/// Disjoint non-empty blocks covering the player set.
struct CoalitionPartition {
    std::vector<std::string> players;
    std::vector<std::vector<std::string>> blocks;
};

/// Ising system on {0,1} spins: subset interactions J_T and an inverse
/// temperature beta.
struct IsingSpec {
    std::vector<std::string> spins;
    std::map<std::set<std::string>, Rational> interactions;
    Rational beta = Rational(1);
};

namespace detail {

inline std::string subset_label(const std::vector<std::string>& sorted_members) {
    std::string s;
    for (const auto& m : sorted_members) {
        if (!s.empty()) s += '|';
        s += m;
    }
    return s;
}

inline std::set<std::string> split_members_set(const std::string& label) {
    std::set<std::string> out;
    std::string cur;
    for (char c : label) {
        if (c == '|') {
            out.insert(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.insert(cur);
    return out;
}

inline void check_member_labels(const std::vector<std::string>& labels) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw InvalidIdError("empty label");
        if (l.find('|') != std::string::npos)
            throw InvalidIdError("'|' is reserved for subset names: " + l);
        if (!seen.insert(l).second) throw DuplicateIdError(l);
    }
}

/// Hasse diagram of the Boolean algebra over `atoms`, bottom removed.
/// Vertex of mask m is the union of the atoms' member lists.
inline DamgPtr boolean_hasse(const std::vector<std::vector<std::string>>& atom_members) {
    const unsigned k = static_cast<unsigned>(atom_members.size());
    std::vector<std::string> mask_label(1u << k);
    for (unsigned m = 1; m < (1u << k); ++m) {
        std::vector<std::string> members;
        for (unsigned i = 0; i < k; ++i)
            if (m & (1u << i))
                members.insert(members.end(), atom_members[i].begin(), atom_members[i].end());
        std::sort(members.begin(), members.end());
        mask_label[m] = subset_label(members);
    }
    std::vector<std::string> vertices(mask_label.begin() + 1, mask_label.end());
    std::vector<Damg::EdgeSpec> edges;
    for (unsigned m = 1; m < (1u << k); ++m)
        for (unsigned i = 0; i < k; ++i)
            if (!(m & (1u << i)))
                edges.push_back({mask_label[m] + ">" + mask_label[m | (1u << i)], mask_label[m],
                                 mask_label[m | (1u << i)]});
    return build_damg(vertices, edges);
}

}  // namespace detail

/// Hasse diagram of the power set of `players` minus the empty set.
/// Vertices are named by their sorted members joined with '|'; the roots
/// are the singletons.
inline DamgPtr power_set_damg(const std::vector<std::string>& players) {
    if (players.empty() || players.size() > 20)
        throw TooLargeError("player count must be between 1 and 20");
    detail::check_member_labels(players);
    std::vector<std::string> sorted = players;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<std::string>> atoms;
    for (const auto& p : sorted) atoms.push_back({p});
    return detail::boolean_hasse(atoms);
}

/// DAG of a Hasse diagram: exactly the cover edges. Rejects pairs implied
/// by transitivity and duplicate pairs.
inline DamgPtr hasse_damg(const PosetSpec& spec) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& p : spec.cover_pairs)
        if (!seen.insert(p).second) throw NotACoverRelationError(p.first, p.second);
    std::vector<Damg::EdgeSpec> edges;
    for (const auto& [lo, hi] : spec.cover_pairs) edges.push_back({lo + "<" + hi, lo, hi});
    DamgPtr g = build_damg(spec.elements, edges);  // raises CycleError if cyclic
    for (const auto& [lo, hi] : spec.cover_pairs) {
        Bitset between = g->descendants(g->index_of(lo)) & g->ancestors(g->index_of(hi));
        if (between.count() > 2) throw NotACoverRelationError(lo, hi);
    }
    return g;
}

/// Hasse DAG of a lattice with its bottom element removed; the roots are
/// the atoms.
inline DamgPtr lattice_damg(const PosetSpec& spec, const std::string& bottom) {
    bool declared = false;
    for (const auto& e : spec.elements) declared = declared || e == bottom;
    if (!declared) throw NoUniqueBottomError("bottom element " + bottom + " is not declared");
    std::set<std::string> covered;  // elements with something below them
    for (const auto& [lo, hi] : spec.cover_pairs) covered.insert(hi);
    for (const auto& e : spec.elements)
        if (e != bottom && !covered.count(e))
            throw NoUniqueBottomError("minimal element " + e + " differs from bottom " + bottom);
    if (covered.count(bottom))
        throw NoUniqueBottomError("bottom " + bottom + " has an element below it");
    PosetSpec reduced;
    for (const auto& e : spec.elements)
        if (e != bottom) reduced.elements.push_back(e);
    for (const auto& p : spec.cover_pairs)
        if (p.first != bottom && p.second != bottom) reduced.cover_pairs.push_back(p);
    return hasse_damg(reduced);
}

/// Coalition mereology: the Boolean algebra over the partition's blocks,
/// bottom removed. Vertices are unions of blocks named by their members.
inline DamgPtr coalition_damg(const CoalitionPartition& part) {
    if (part.blocks.empty() || part.blocks.size() > 20)
        throw TooLargeError("block count must be between 1 and 20");
    detail::check_member_labels(part.players);
    std::set<std::string> assigned;
    for (const auto& block : part.blocks) {
        if (block.empty()) throw Error("empty coalition block");
        for (const auto& p : block) {
            if (std::find(part.players.begin(), part.players.end(), p) == part.players.end())
                throw UnknownVertexError(p);
            if (!assigned.insert(p).second) throw Error("blocks overlap at player " + p);
        }
    }
    if (assigned.size() != part.players.size())
        throw Error("blocks do not cover the player set");
    std::vector<std::vector<std::string>> atoms;
    for (const auto& block : part.blocks) {
        auto members = block;
        std::sort(members.begin(), members.end());
        atoms.push_back(std::move(members));
    }
    std::sort(atoms.begin(), atoms.end());
    return detail::boolean_hasse(atoms);
}

/// Ising game: the power-set mereology over the spins with value function
/// v(y) = beta * E(y=1, rest=0) = beta * sum of J_T over interactions T
/// inside y. Its Moebius transform recovers beta * J subset-wise.
inline std::pair<DamgPtr, ValueFunction<Rational>> ising_game(const IsingSpec& spec) {
    if (spec.spins.empty() || spec.spins.size() > 15)
        throw TooLargeError("spin count must be between 1 and 15");
    for (const auto& [subset, _] : spec.interactions) {
        if (subset.empty()) throw Error("interaction on the empty subset");
        for (const auto& s : subset)
            if (std::find(spec.spins.begin(), spec.spins.end(), s) == spec.spins.end())
                throw UnknownVertexError(s);
    }
    DamgPtr g = power_set_damg(spec.spins);
    std::vector<Rational> vals(g->size(), Rational(0));
    for (int x = 0; x < g->size(); ++x) {
        auto members = detail::split_members_set(g->label(x));
        Rational energy(0);
        for (const auto& [subset, j] : spec.interactions) {
            bool inside = true;
            for (const auto& s : subset) inside = inside && members.count(s);
            if (inside) energy += j;
        }
        vals[x] = spec.beta * energy;
    }
    return {g, ValueFunction<Rational>(g, std::move(vals))};
}

}  // namespace damg
