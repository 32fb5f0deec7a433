#include <algorithm>
#include <catch_amalgamated.hpp>

#include "damg/damg.hpp"
#include "test_support.hpp"

using namespace damg;
using namespace damg::testing;

namespace {

std::set<std::string> edge_id_set(const Damg& g) {
    std::set<std::string> ids;
    for (const auto& e : g.edges()) ids.insert(e.id);
    return ids;
}

}  // namespace

TEST_CASE("project_vertex on figure 1") {
    auto g = figure1_graph();
    auto q = path_uniform_kernel(g);
    auto w = moebius_transform(figure1_values(g));

    SECTION("removing e composes the through edges") {
        auto res = project_vertex(g, q, w, "e");
        CHECK(res.graph->size() == 7);
        auto ids = edge_id_set(*res.graph);
        CHECK(ids == std::set<std::string>{"ad", "bd", "df", "dg", "be*eg", "be*eh", "ce*eg",
                                           "ce*eh"});
        // e was weak, so all surviving synergies are unchanged.
        for (int x = 0; x < res.graph->size(); ++x)
            CHECK(res.synergy.value(x) == w.value(res.graph->label(x)));
        // values recovered from the projected synergies
        CHECK(res.value.value("g") == 14);
        CHECK(res.value.value("h") == 9);
        CHECK(res.value.value("d") == 3);
        CHECK(res.kernel.normalized());
    }

    SECTION("removing d and e leaves parallel edges b->g") {
        auto res = project_subset(g, q, w, {"d", "e"});
        CHECK(res.graph->size() == 6);
        auto bi = res.graph->index_of("b"), gi = res.graph->index_of("g");
        CHECK(res.graph->multiplicity(bi, gi) == 2);
        auto ids = edge_id_set(*res.graph);
        CHECK(ids == std::set<std::string>{"ad*df", "ad*dg", "bd*df", "bd*dg", "be*eg", "be*eh",
                                           "ce*eg", "ce*eh"});
        CHECK(res.value.value("g") == 14);
        CHECK(res.value.value("f") == 5);
        // path counts are preserved: pi(b,g) is still 2
        CHECK(path_count_row(*res.graph, bi)[gi] == 2);
    }

    SECTION("removing a leaf with zero synergy changes nothing else") {
        // tune v(h) so that w(h) = 0: v(h) = w(b) + w(c) + w(e) = 5
        auto vals = figure1_values(g).values();
        vals[g->index_of("h")] = 5;
        auto w0 = moebius_transform(ValueFunction<Rational>(g, vals));
        REQUIRE(w0.value("h") == 0);
        auto res = project_vertex(g, q, w0, "h");
        CHECK_FALSE(res.graph->has_vertex("h"));
        for (int x = 0; x < res.graph->size(); ++x)
            CHECK(res.synergy.value(x) == w0.value(res.graph->label(x)));
    }

    SECTION("unknown vertex") {
        CHECK_THROWS_AS(project_vertex(g, q, w, "zz"), UnknownVertexError);
    }

    SECTION("empty subset is the identity") {
        auto res = project_subset(g, q, w, {});
        CHECK(*res.graph == *g);
        CHECK(res.synergy.values() == w.values());
    }

    SECTION("projection blowup guard") {
        CHECK_THROWS_AS(project_subset(g, q, w, {"d", "e"}, 3), ProjectionBlowupError);
    }
}

TEST_CASE("project_onto is the complement projection") {
    auto g = figure1_graph();
    auto q = path_uniform_kernel(g);
    auto w = moebius_transform(figure1_values(g));
    auto onto = project_onto(g, q, w, {"a", "b", "c", "f", "g", "h"});
    auto remove = project_subset(g, q, w, {"d", "e"});
    CHECK(*onto.graph == *remove.graph);
    CHECK(onto.synergy.values() == remove.synergy.values());
}

TEST_CASE("projections commute") {
    Rng rng(83);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_damg(rng, 10);
        auto q = path_uniform_kernel(g);
        auto v = random_game(rng, g);
        auto w = moebius_transform(v);
        auto S = random_nonroot_subset(rng, g);
        if (S.size() < 2) continue;

        auto all_at_once = project_subset(g, q, w, S);
        // split S into two disjoint halves and project in both orders
        std::set<std::string> s1, s2;
        bool flip = false;
        for (const auto& z : S) (flip = !flip) ? s1.insert(z) : s2.insert(z);
        auto first = project_subset(g, q, w, s1);
        auto then = project_subset(first.graph, first.kernel, first.synergy, s2);
        auto swapped = project_subset(g, q, w, s2);
        auto swapped_then = project_subset(swapped.graph, swapped.kernel, swapped.synergy, s1);

        CHECK(*all_at_once.graph == *then.graph);
        CHECK(*then.graph == *swapped_then.graph);
        CHECK(then.synergy.values() == swapped_then.synergy.values());
        CHECK(all_at_once.synergy.values() == then.synergy.values());
        CHECK(then.kernel.per_edge() == swapped_then.kernel.per_edge());
        CHECK(all_at_once.value.values() == then.value.values());
    }
}

TEST_CASE("projection stability properties") {
    Rng rng(89);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = random_damg(rng, 12);
        auto S = random_nonroot_subset(rng, g);
        auto q = path_uniform_kernel(g);
        auto v = random_game(rng, g);
        auto w = moebius_transform(v);
        auto res = project_subset(g, q, w, S);
        const auto& pg = *res.graph;

        std::vector<std::string> roots_before, roots_after;
        for (int r : g->roots()) roots_before.push_back(g->label(r));
        for (int r : pg.roots()) roots_after.push_back(pg.label(r));
        CHECK(roots_before == roots_after);

        // ancestors: Anc^{G\S}(y) = Anc^G(y) \ S
        for (int y = 0; y < pg.size(); ++y) {
            auto expected = labels_of(*g, g->ancestors(g->index_of(pg.label(y))));
            std::vector<std::string> filtered;
            for (auto& a : expected)
                if (!S.count(a)) filtered.push_back(a);
            CHECK(labels_of(pg, pg.ancestors(y)) == filtered);
        }

        // path counts are preserved
        for (int x = 0; x < pg.size(); ++x) {
            auto row_new = path_count_row(pg, x);
            auto row_old = path_count_row(*g, g->index_of(pg.label(x)));
            for (int y = 0; y < pg.size(); ++y)
                CHECK(row_new[y] == row_old[g->index_of(pg.label(y))]);
        }

        // total path weights are preserved
        auto s_old = kernel_total_weights(g, q);
        auto s_new = kernel_total_weights(res.graph, res.kernel);
        for (int x = 0; x < pg.size(); ++x)
            for (int y = 0; y < pg.size(); ++y)
                CHECK(s_new.at(x, y) ==
                      s_old.at(g->index_of(pg.label(x)), g->index_of(pg.label(y))));

        // synergy of the projected value function is the projected synergy
        CHECK(moebius_transform(res.value) == res.synergy);

        // efficiency: sums agree since S avoids the roots
        CHECK(res.synergy.total() == w.total());

        // kernel stays normalized (S subset of non-roots is admissible)
        CHECK(res.kernel.normalized());

        // path uniform weights commute with projection
        auto direct = path_uniform_kernel(res.graph);
        CHECK(direct.per_edge() == res.kernel.per_edge());
    }
}

TEST_CASE("induced kernels and strengths commute with admissible projections") {
    Rng rng(97);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = random_damg(rng, 12);
        auto S = random_nonroot_subset(rng, g);
        auto sw = random_edge_weights(rng, g, /*positive=*/true);
        auto tauw = random_root_weights(rng, g);

        auto [pg, psw] = project_edge_weights(g, sw, S);
        // sigma is stable
        auto sig_old = total_path_weights(g, sw);
        auto sig_new = total_path_weights(pg, psw);
        for (int x = 0; x < pg->size(); ++x)
            for (int y = 0; y < pg->size(); ++y)
                CHECK(sig_new.at(x, y) ==
                      sig_old.at(g->index_of(pg->label(x)), g->index_of(pg->label(y))));

        // tau is stable (recomputed on the projection from the same roots)
        RootWeights tau_restricted(pg, [&] {
            std::map<std::string, Rational> m;
            for (int r : pg->roots()) m.emplace(pg->label(r), tauw.at(g->index_of(pg->label(r))));
            return m;
        }());
        auto strengths_old = extend_root_weights(g, sw, tauw);
        auto strengths_new = extend_root_weights(pg, psw, tau_restricted);
        for (int x = 0; x < pg->size(); ++x)
            CHECK(strengths_new[x] == strengths_old[g->index_of(pg->label(x))]);

        // induced kernel commutes with the projection
        auto qi = induced_kernel(g, sw, tauw);
        auto [pg2, qproj] = project_kernel(g, qi, S);
        auto qdirect = induced_kernel(pg2, EdgeWeights(pg2, psw.per_edge()),
                                      RootWeights(pg2, [&] {
                                          std::map<std::string, Rational> m;
                                          for (int r : pg2->roots())
                                              m.emplace(pg2->label(r),
                                                        tauw.at(g->index_of(pg2->label(r))));
                                          return m;
                                      }()));
        CHECK(qproj.per_edge() == qdirect.per_edge());
    }
}

TEST_CASE("admissibility") {
    SECTION("subsets of non-roots are always restricted admissible") {
        Rng rng(101);
        for (int trial = 0; trial < 30; ++trial) {
            auto g = random_damg(rng, 10);
            auto S = random_nonroot_subset(rng, g);
            CHECK(is_admissible(g, S));
            CHECK(is_restricted_admissible(g, S));
        }
    }
    SECTION("the whole vertex set of a connected graph is not restricted") {
        auto g = reverse_tree_graph();
        std::set<std::string> all(g->labels().begin(), g->labels().end());
        CHECK_FALSE(is_restricted_admissible(g, all));
    }
    SECTION("a two-root shared child makes a one-root removal inadmissible") {
        // Pa(y) = {u, x} both roots, u in S, x not in S
        auto g = build_damg({"u", "x", "y"}, {{"uy", "u", "y"}, {"xy", "x", "y"}});
        CHECK_FALSE(is_admissible(g, {"u"}));
        CHECK(is_admissible(g, {"u", "x"}));  // all parents inside
    }
    SECTION("root-only removals that strand a vertex behind one root") {
        auto g = build_damg({"r", "y"}, {{"e", "r", "y"}});
        // Pa(y) = {r} which lies fully inside U = {r}: admissible
        CHECK(is_admissible(g, {"r"}));
        // but it is not restricted when the whole root-to-leaf path r->y is inside
        CHECK(is_restricted_admissible(g, {"r"}));
        CHECK_FALSE(is_restricted_admissible(g, {"r", "y"}));
    }
}

TEST_CASE("weak and null elements") {
    SECTION("figure 1") {
        auto g = figure1_graph();
        auto v = figure1_values(g);
        CHECK(weak_elements(v) == std::set<std::string>{"d", "e"});
        CHECK(null_elements(v).empty());
    }
    SECTION("zero game makes everything null") {
        auto g = figure1_graph();
        ValueFunction<Rational> z(g, std::vector<Rational>(g->size(), Rational(0)));
        CHECK(null_elements(z).size() == static_cast<std::size_t>(g->size()));
    }
    SECTION("unanimity at g: null elements are those not above g") {
        auto g = figure1_graph();
        auto z = unanimity(g, "g");
        auto v = inverse_moebius(moebius_transform(z));  // same function
        auto nulls = null_elements(z);
        for (int x = 0; x < g->size(); ++x) {
            bool has_g_below = g->descendants(x).test(g->index_of("g"));
            CHECK(nulls.count(g->label(x)) == (has_g_below ? 0u : 1u));
        }
        CHECK(nulls == std::set<std::string>{"f", "h"});
    }
    SECTION("null implies weak") {
        Rng rng(103);
        for (int trial = 0; trial < 30; ++trial) {
            auto g = random_damg(rng, 12);
            // force some weak spots by zeroing random synergies
            auto w = moebius_transform(random_game(rng, g));
            std::vector<Rational> wv = w.values();
            for (auto& x : wv)
                if (rng() % 2) x = 0;
            auto v = inverse_moebius(ValueFunction<Rational>(g, wv));
            auto weak = weak_elements(v);
            for (const auto& n : null_elements(v)) CHECK(weak.count(n) == 1);
        }
    }
}

TEST_CASE("drop_weak") {
    auto g = figure1_graph();
    auto v = figure1_values(g);
    auto q = path_uniform_kernel(g);
    SECTION("dropping e restricts the values") {
        auto res = drop_weak(g, q, v, {"e"});
        CHECK(res.graph->size() == 7);
        for (int x = 0; x < res.graph->size(); ++x)
            CHECK(res.value.value(x) == v.value(res.graph->label(x)));
        // synergy of the restriction equals the restricted synergy
        auto w_full = moebius_transform(v);
        auto w_rest = moebius_transform(res.value);
        for (int x = 0; x < res.graph->size(); ++x)
            CHECK(w_rest.value(x) == w_full.value(res.graph->label(x)));
    }
    SECTION("dropping both weak elements matches the bottom panel") {
        auto res = drop_weak(g, q, v, {"d", "e"});
        CHECK(res.graph->size() == 6);
        CHECK(res.value.value("g") == 14);
        CHECK(res.value.value("f") == 5);
        auto w_rest = moebius_transform(res.value);
        CHECK(w_rest.value("g") == 8);
        CHECK(w_rest.value("f") == 2);
    }
    SECTION("empty set is the identity") {
        auto res = drop_weak(g, q, v, {});
        CHECK(*res.graph == *g);
        CHECK(res.value.values() == v.values());
    }
    SECTION("non-weak vertices are rejected") {
        CHECK_THROWS_AS(drop_weak(g, q, v, {"g"}), NotWeakError);
    }
    SECTION("weak roots are rejected") {
        // make the root a weak: v(a) = 0
        auto vals = v.values();
        vals[g->index_of("a")] = 0;
        ValueFunction<Rational> v2(g, vals);
        CHECK_THROWS_AS(drop_weak(g, q, v2, {"a"}), NotWeakError);
    }
}

TEST_CASE("null elements survive projection") {
    Rng rng(163);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_damg(rng, 12);
        auto q = path_uniform_kernel(g);
        // zero out synergies below a random vertex to manufacture nulls
        auto w = moebius_transform(random_game(rng, g)).values();
        int seed_vertex = static_cast<int>(rng() % g->size());
        const auto& desc = g->descendants(seed_vertex);
        for (auto y = desc.find_first(); y != Bitset::npos; y = desc.find_next(y)) w[y] = 0;
        auto v = inverse_moebius(ValueFunction<Rational>(g, w));
        auto nulls = null_elements(v);
        auto S = random_nonroot_subset(rng, g);
        auto res = project_subset(g, q, moebius_transform(v), S);
        auto nulls_after = null_elements(res.value);
        for (const auto& n : nulls)
            if (!S.count(n)) CHECK(nulls_after.count(n) == 1);
    }
}

TEST_CASE("roots only grow when roots are projected out") {
    Rng rng(167);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_damg(rng, 10);
        std::set<std::string> S;
        for (int v = 0; v < g->size(); ++v)
            if (rng() % 3 == 0) S.insert(g->label(v));  // may include roots
        std::vector<Rational> dummy(g->edges().size(), Rational(0));
        DamgPtr cur = g;
        for (const auto& z : damg::detail::removal_order(*g, S))
            std::tie(cur, dummy) = project_graph_weights(cur, dummy, z);
        // Rt(G) \ S is contained in Rt(G \ S)
        for (int r : g->roots())
            if (!S.count(g->label(r))) CHECK(cur->is_root(cur->index_of(g->label(r))));
    }
}

TEST_CASE("projected synergy at a vertex equals its total-weight aggregate") {
    // After projecting out all proper descendants of x, the synergy at x
    // collects s(x|y) * w(y) over the original descendants.
    Rng rng(179);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_damg(rng, 12);
        auto q = path_uniform_kernel(g);
        auto v = random_game(rng, g);
        auto w = moebius_transform(v);
        auto s = kernel_total_weights(g, q);
        int x = static_cast<int>(rng() % g->size());
        std::set<std::string> S;
        const auto& desc = g->descendants(x);
        for (auto y = desc.find_next(x); y != Bitset::npos; y = desc.find_next(y))
            S.insert(g->label(static_cast<int>(y)));
        auto res = project_subset(g, q, w, S);
        Rational expected(0);
        for (auto y = desc.find_first(); y != Bitset::npos; y = desc.find_next(y))
            expected += s.at(x, static_cast<int>(y)) * w.value(static_cast<int>(y));
        CHECK(res.synergy.value(g->label(x)) == expected);
    }
}
