#include <catch_amalgamated.hpp>

#include "damg/damg.hpp"
#include "test_support.hpp"

using namespace damg;
using namespace damg::testing;

TEST_CASE("shapley on the worked examples") {
    SECTION("figure 1") {
        auto g = figure1_graph();
        auto v = figure1_values(g);
        auto q = path_uniform_kernel(g);
        for (const auto& attr : {shapley_total_weights(g, q, v), shapley_recursive(g, q, v),
                                 shapley_path_uniform(g, v)}) {
            CHECK(attr.at("a") == 4);
            CHECK(attr.at("b") == 9);
            CHECK(attr.at("c") == 7);
            CHECK(attr.total(Rational(0)) == 20);
        }
    }
    SECTION("reverse tree") {
        auto g = reverse_tree_graph();
        auto v = reverse_tree_values(g);
        auto sh = shapley_path_uniform(g, v);
        CHECK(sh.at("a") == Rational(7, 3));
        CHECK(sh.at("b") == Rational(7, 3));
        CHECK(sh.at("c") == Rational(7, 3));
    }
    SECTION("poset game") {
        auto g = hasse_damg(PosetSpec{{"a", "b", "c", "d"},
                                      {{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}}});
        ValueFunction<Rational> v(
            g, std::map<std::string, Rational>{{"a", 2}, {"b", 1}, {"c", 4}, {"d", 5}});
        auto sh = shapley_total_weights(g, path_uniform_kernel(g), v);
        CHECK(sh.at("a") == Rational(7, 2));
        CHECK(sh.at("b") == Rational(5, 2));
    }
    SECTION("edgeless graph returns the values themselves") {
        auto g = build_damg({"x", "y", "z"}, {});
        ValueFunction<Rational> v(
            g, std::map<std::string, Rational>{{"x", 5}, {"y", -1}, {"z", Rational(1, 3)}});
        auto sh = shapley_total_weights(g, path_uniform_kernel(g), v);
        CHECK(sh.at("x") == 5);
        CHECK(sh.at("y") == -1);
        CHECK(sh.at("z") == Rational(1, 3));
    }
    SECTION("zero game gives zero attributions") {
        auto g = figure1_graph();
        ValueFunction<Rational> z(g, std::vector<Rational>(g->size(), Rational(0)));
        auto sh = shapley_recursive(g, path_uniform_kernel(g), z);
        for (const auto& [_, val] : sh.per_root) CHECK(val == 0);
    }
    SECTION("unnormalized kernels are rejected") {
        auto g = reverse_tree_graph();
        auto bad = ProjectionKernel::from_map(g, {{"ad", Rational(1)}, {"bd", Rational(1)}},
                                              "broken");
        REQUIRE_FALSE(bad.normalized());
        auto v = reverse_tree_values(g);
        CHECK_THROWS_AS(shapley_total_weights(g, bad, v), KernelNotNormalizedError);
        CHECK_THROWS_AS(shapley_recursive(g, bad, v), KernelNotNormalizedError);
    }
}

TEST_CASE("engine equivalence on random instances") {
    Rng rng(107);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = random_damg(rng);
        auto v = random_game(rng, g);
        auto q = path_uniform_kernel(g);
        auto a = shapley_total_weights(g, q, v);
        auto b = shapley_recursive(g, q, v);
        auto c = shapley_path_uniform(g, v);
        CHECK(a.per_root == b.per_root);
        CHECK(b.per_root == c.per_root);
        // the precomputed-s overload is the same computation
        auto s = kernel_total_weights(g, q);
        CHECK(shapley_total_weights(g, q, v, &s).per_root == a.per_root);
    }
}

TEST_CASE("shapley properties") {
    Rng rng(109);
    SECTION("efficiency") {
        for (int trial = 0; trial < 40; ++trial) {
            auto g = random_damg(rng);
            auto v = random_game(rng, g);
            auto w = moebius_transform(v);
            auto sh = shapley_recursive(g, path_uniform_kernel(g), v);
            CHECK(sh.total(Rational(0)) == w.total());
        }
    }
    SECTION("null roots receive zero") {
        for (int trial = 0; trial < 40; ++trial) {
            auto g = random_damg(rng, 12);
            int r = g->roots()[rng() % g->roots().size()];
            auto w = moebius_transform(random_game(rng, g)).values();
            const auto& desc = g->descendants(r);
            for (auto y = desc.find_first(); y != Bitset::npos; y = desc.find_next(y))
                w[y] = 0;
            auto v = inverse_moebius(ValueFunction<Rational>(g, w));
            auto sh = shapley_recursive(g, path_uniform_kernel(g), v);
            CHECK(sh.at(g->label(r)) == 0);
        }
    }
    SECTION("R-linearity and A-linearity") {
        for (int trial = 0; trial < 30; ++trial) {
            auto g = random_damg(rng, 12);
            auto q = path_uniform_kernel(g);
            auto v1 = random_game(rng, g), v2 = random_game(rng, g);
            Rational c1 = random_rational(rng), c2 = random_rational(rng);
            std::vector<Rational> combo;
            for (int x = 0; x < g->size(); ++x)
                combo.push_back(c1 * v1.value(x) + c2 * v2.value(x));
            auto sh = shapley_recursive(g, q, ValueFunction<Rational>(g, combo));
            auto s1 = shapley_recursive(g, q, v1), s2 = shapley_recursive(g, q, v2);
            for (const auto& [root, val] : sh.per_root)
                CHECK(val == c1 * s1.at(root) + c2 * s2.at(root));

            VecQ a1{random_rational(rng), random_rational(rng), random_rational(rng)};
            VecQ a2{random_rational(rng), random_rational(rng), random_rational(rng)};
            std::vector<VecQ> mixed;
            for (int x = 0; x < g->size(); ++x)
                mixed.push_back(scale(v1.value(x), a1) + scale(v2.value(x), a2));
            auto shv = shapley_recursive(g, q, ValueFunction<VecQ>(g, mixed));
            for (const auto& [root, val] : shv.per_root)
                CHECK(val == scale(s1.at(root), a1) + scale(s2.at(root), a2));
        }
    }
    SECTION("projection axiom: attribution survives projecting non-roots") {
        for (int trial = 0; trial < 30; ++trial) {
            auto g = random_damg(rng, 12);
            auto q = path_uniform_kernel(g);
            auto v = random_game(rng, g);
            auto S = random_nonroot_subset(rng, g);
            auto res = project_subset(g, q, moebius_transform(v), S);
            auto before = shapley_total_weights(g, q, v);
            auto after = shapley_total_weights(res.graph, res.kernel, res.value);
            CHECK(before.per_root == after.per_root);
        }
    }
    SECTION("weak elements axiom: dropping weak non-roots with restriction") {
        for (int trial = 0; trial < 30; ++trial) {
            auto g = random_damg(rng, 12);
            auto q = path_uniform_kernel(g);
            auto w = moebius_transform(random_game(rng, g)).values();
            std::set<std::string> W;
            for (int x = 0; x < g->size(); ++x) {
                if (g->is_root(x)) continue;
                if (rng() % 2) {
                    w[x] = 0;
                    if (rng() % 2) W.insert(g->label(x));
                }
            }
            auto v = inverse_moebius(ValueFunction<Rational>(g, w));
            auto dropped = drop_weak(g, q, v, W);
            auto before = shapley_total_weights(g, q, v);
            auto after = shapley_total_weights(dropped.graph, dropped.kernel, dropped.value);
            CHECK(before.per_root == after.per_root);
        }
    }
    SECTION("flat hierarchy: unanimity games get edge-uniform shares") {
        for (int trial = 0; trial < 40; ++trial) {
            auto g = random_flat_damg(rng);
            for (int y = 0; y < g->size(); ++y) {
                auto sh = shapley_path_uniform(g, unanimity(g, g->label(y)));
                for (int r : g->roots()) {
                    if (g->is_root(y)) {
                        CHECK(sh.at(g->label(r)) == (r == y ? 1 : 0));
                    } else {
                        CHECK(sh.at(g->label(r)) ==
                              Rational(g->multiplicity(r, y),
                                       static_cast<long long>(g->in_edges(y).size())));
                    }
                }
            }
        }
    }
    SECTION("symmetry under a verified automorphism") {
        auto g = reverse_tree_graph();
        std::map<std::string, std::string> vm{{"a", "b"}, {"b", "a"}, {"c", "c"},
                                              {"d", "d"}, {"e", "e"}};
        std::map<std::string, std::string> em{
            {"ad", "bd"}, {"bd", "ad"}, {"de", "de"}, {"ce", "ce"}};
        REQUIRE(verify_automorphism(g, vm, em));
        Rng rng2(211);
        for (int trial = 0; trial < 20; ++trial) {
            auto v = random_game(rng2, g);
            std::map<std::string, Rational> pulled;
            for (int x = 0; x < g->size(); ++x)
                pulled.emplace(g->label(x), v.value(vm.at(g->label(x))));
            auto sh = shapley_path_uniform(g, v);
            auto sh_pulled = shapley_path_uniform(g, ValueFunction<Rational>(g, pulled));
            for (int r : g->roots())
                CHECK(sh.at(vm.at(g->label(r))) == sh_pulled.at(g->label(r)));
        }
    }
}

TEST_CASE("weighted shapley") {
    SECTION("constant weights reduce to path uniform") {
        Rng rng(113);
        for (int trial = 0; trial < 30; ++trial) {
            auto g = random_damg(rng, 12);
            auto v = random_game(rng, g);
            auto a = shapley_weighted(g, EdgeWeights::ones(g), RootWeights::ones(g), v);
            CHECK(a.per_root == shapley_path_uniform(g, v).per_root);
        }
    }
    SECTION("equals the total-weights engine on the induced kernel") {
        Rng rng(127);
        for (int trial = 0; trial < 30; ++trial) {
            auto g = random_damg(rng, 12);
            auto sw = random_edge_weights(rng, g, /*positive=*/true);
            auto tau = random_root_weights(rng, g);
            auto v = random_game(rng, g);
            auto direct = shapley_weighted(g, sw, tau, v);
            auto via_kernel = shapley_total_weights(g, induced_kernel(g, sw, tau), v);
            CHECK(direct.per_root == via_kernel.per_root);
        }
    }
    SECTION("coalition strength tau(r) = |r| gives |r|/|y| coefficients") {
        auto g = coalition_damg({{"a", "b", "c", "d", "e"},
                                 {{"a", "b"}, {"c"}, {"d"}, {"e"}}});
        std::map<std::string, Rational> tau;
        for (int r : g->roots())
            tau.emplace(g->label(r), Rational(static_cast<long long>(
                                         damg::detail::split_members(g->label(r)).size())));
        auto q = induced_kernel(g, EdgeWeights::ones(g), RootWeights(g, tau));
        auto s = kernel_total_weights(g, q);
        for (int r : g->roots()) {
            auto rsize = damg::detail::split_members(g->label(r)).size();
            for (int y = 0; y < g->size(); ++y) {
                if (!g->is_ancestor(r, y)) continue;
                auto ysize = damg::detail::split_members(g->label(y)).size();
                CHECK(s.at(r, y) == Rational(static_cast<long long>(rsize),
                                             static_cast<long long>(ysize)));
            }
        }
    }
    SECTION("grabisch coefficients with one non-trivial coalition") {
        auto g = coalition_damg({{"a", "b", "c", "d", "e"},
                                 {{"a", "b"}, {"c"}, {"d"}, {"e"}}});
        auto s = kernel_total_weights(
            g, induced_kernel(g, EdgeWeights::ones(g), RootWeights::ones(g)));
        int r1 = g->index_of("a|b");
        for (int y = 0; y < g->size(); ++y) {
            if (!g->is_ancestor(r1, y)) continue;
            long long ysize =
                static_cast<long long>(damg::detail::split_members(g->label(y)).size());
            CHECK(s.at(r1, y) == Rational(1, ysize - 2 + 1));
        }
    }
    SECTION("zero strengths are rejected") {
        auto g = build_damg({"r", "y"}, {{"e", "r", "y"}});
        auto sw = EdgeWeights::from_map(g, {{"e", Rational(0)}});
        auto v = ValueFunction<Rational>(g, std::map<std::string, Rational>{{"r", 1}, {"y", 2}});
        CHECK_THROWS_AS(shapley_weighted(g, sw, RootWeights::ones(g), v), ZeroStrengthError);
    }
}

TEST_CASE("classic shapley oracle") {
    SECTION("one player") {
        auto g = power_set_damg({"a"});
        ValueFunction<Rational> v(g, std::map<std::string, Rational>{{"a", Rational(5, 2)}});
        CHECK(classic_shapley_oracle(v).at("a") == Rational(5, 2));
    }
    SECTION("two players, hand-computed") {
        auto g = power_set_damg({"a", "b"});
        ValueFunction<Rational> v(
            g, std::map<std::string, Rational>{{"a", 1}, {"b", 0}, {"a|b", 3}});
        auto sh = classic_shapley_oracle(v);
        CHECK(sh.at("a") == 2);
        CHECK(sh.at("b") == 1);
    }
    SECTION("symmetric square game splits evenly") {
        auto g = power_set_damg({"a", "b", "c"});
        std::map<std::string, Rational> v;
        for (int x = 0; x < g->size(); ++x) {
            auto k = static_cast<long long>(damg::detail::split_members(g->label(x)).size());
            v.emplace(g->label(x), Rational(k * k));
        }
        auto sh = classic_shapley_oracle(ValueFunction<Rational>(g, v));
        CHECK(sh.at("a") == 3);
        CHECK(sh.at("b") == 3);
        CHECK(sh.at("c") == 3);
    }
    SECTION("path uniform equals the oracle on power sets") {
        Rng rng(131);
        for (int n = 2; n <= 5; ++n) {
            std::vector<std::string> players;
            for (int i = 0; i < n; ++i) players.push_back(std::string(1, char('a' + i)));
            auto g = power_set_damg(players);
            for (int trial = 0; trial < 10; ++trial) {
                auto v = random_game(rng, g);
                CHECK(shapley_path_uniform(g, v).per_root ==
                      classic_shapley_oracle(v).per_root);
            }
        }
    }
    SECTION("player guard") {
        std::vector<std::string> many;
        for (int i = 0; i < 11; ++i) many.push_back(std::string(1, char('a' + i)));
        auto g = power_set_damg(many);
        ValueFunction<Rational> v(g, std::vector<Rational>(g->size(), Rational(1)));
        CHECK_THROWS_AS(classic_shapley_oracle(v), TooManyPlayersError);
    }
}

TEST_CASE("chain comparator") {
    SECTION("reverse tree disagrees with path uniform exactly as reported") {
        auto g = reverse_tree_graph();
        auto v = reverse_tree_values(g);
        auto sh = chain_shapley_comparator(g, v);
        CHECK(sh.at("a") == Rational(5, 3));
        CHECK(sh.at("b") == Rational(5, 3));
        CHECK(sh.at("c") == Rational(11, 3));
        // efficiency still holds on this lattice
        CHECK(sh.total(Rational(0)) == 7);
    }
    SECTION("agrees with the classic oracle on Boolean lattices") {
        Rng rng(137);
        for (int n = 2; n <= 4; ++n) {
            std::vector<std::string> players;
            for (int i = 0; i < n; ++i) players.push_back(std::string(1, char('a' + i)));
            auto g = power_set_damg(players);
            for (int trial = 0; trial < 8; ++trial) {
                auto v = random_game(rng, g);
                CHECK(chain_shapley_comparator(g, v).per_root ==
                      classic_shapley_oracle(v).per_root);
            }
        }
    }
    SECTION("custom kernel reproduces the comparator through total weights") {
        auto g = reverse_tree_graph();
        auto v = reverse_tree_values(g);
        auto q = ProjectionKernel::from_map(g,
                                            {{"ad", Rational(1, 2)},
                                             {"bd", Rational(1, 2)},
                                             {"de", Rational(1, 3)},
                                             {"ce", Rational(2, 3)}},
                                            "faigle-kern");
        REQUIRE(q.normalized());
        auto sh = shapley_total_weights(g, q, v);
        CHECK(sh.at("a") == Rational(5, 3));
        CHECK(sh.at("b") == Rational(5, 3));
        CHECK(sh.at("c") == Rational(11, 3));
    }
    SECTION("chain cap") {
        auto g = power_set_damg({"a", "b", "c", "d"});
        ValueFunction<Rational> v(g, std::vector<Rational>(g->size(), Rational(1)));
        CHECK_THROWS_AS(chain_shapley_comparator(g, v, 5), ChainExplosionError);
    }
}

TEST_CASE("vector-valued attribution applies coefficients componentwise") {
    Rng rng(139);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = random_damg(rng, 12);
        auto q = path_uniform_kernel(g);
        auto v = random_vector_game(rng, g);
        auto sh = shapley_recursive(g, q, v);
        // each component equals the scalar attribution of that component
        for (std::size_t k = 0; k < 3; ++k) {
            std::vector<Rational> comp;
            for (int x = 0; x < g->size(); ++x) comp.push_back(v.value(x)[k]);
            auto shk = shapley_recursive(g, q, ValueFunction<Rational>(g, comp));
            for (const auto& [root, val] : sh.per_root) CHECK(val[k] == shk.at(root));
        }
        CHECK(sh.per_root == shapley_total_weights(g, q, v).per_root);
    }
}
