#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "damg/builders.hpp"
#include "damg/cli.hpp"
#include "damg/path_algebra.hpp"
#include "damg/shapley.hpp"

namespace damg::cli {

struct DemoRow {
    std::string name, expected, actual;
    bool pass = false;
};

struct DemoReport {
    std::string demo;
    std::vector<DemoRow> rows;
    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

namespace detail {

inline void expect_rational(DemoReport& rep, const std::string& name, const Rational& expected,
                            const Rational& actual) {
    rep.rows.push_back({name, to_string(expected), to_string(actual), expected == actual});
}

}  // namespace detail

inline DemoReport demo_figure1() {
    DemoReport rep{"figure1", {}};
    auto g = build_damg({"a", "b", "c", "d", "e", "f", "g", "h"},
                        {{"ad", "a", "d"},
                         {"bd", "b", "d"},
                         {"be", "b", "e"},
                         {"ce", "c", "e"},
                         {"df", "d", "f"},
                         {"dg", "d", "g"},
                         {"eg", "e", "g"},
                         {"eh", "e", "h"}});
    ValueFunction<Rational> v(g, std::map<std::string, Rational>{{"a", 1},
                                                                 {"b", 2},
                                                                 {"c", 3},
                                                                 {"d", 3},
                                                                 {"e", 5},
                                                                 {"f", 5},
                                                                 {"g", 14},
                                                                 {"h", 9}});
    auto w = moebius_transform(v);
    const std::map<std::string, Rational> expected_w{{"a", 1}, {"b", 2}, {"c", 3}, {"d", 0},
                                                     {"e", 0}, {"f", 2}, {"g", 8}, {"h", 4}};
    for (const auto& [label, e] : expected_w)
        detail::expect_rational(rep, "w(" + label + ")", e, w.value(label));
    auto sh = shapley_path_uniform(g, v);
    detail::expect_rational(rep, "Sh_a", Rational(4), sh.at("a"));
    detail::expect_rational(rep, "Sh_b", Rational(9), sh.at("b"));
    detail::expect_rational(rep, "Sh_c", Rational(7), sh.at("c"));
    detail::expect_rational(rep, "efficiency", Rational(20), sh.total(Rational(0)));
    return rep;
}

inline DemoReport demo_reverse_tree() {
    DemoReport rep{"reverse-tree", {}};
    auto g = build_damg({"a", "b", "c", "d", "e"},
                        {{"ad", "a", "d"}, {"bd", "b", "d"}, {"de", "d", "e"}, {"ce", "c", "e"}});
    ValueFunction<Rational> v(
        g, std::map<std::string, Rational>{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 2}, {"e", 7}});
    auto sh = shapley_path_uniform(g, v);
    for (const auto& r : {"a", "b", "c"})
        detail::expect_rational(rep, std::string("Sh_") + r, Rational(7, 3), sh.at(r));
    auto chains = chain_shapley_comparator(g, v);
    detail::expect_rational(rep, "chain Sh_a", Rational(5, 3), chains.at("a"));
    detail::expect_rational(rep, "chain Sh_b", Rational(5, 3), chains.at("b"));
    detail::expect_rational(rep, "chain Sh_c", Rational(11, 3), chains.at("c"));
    // The custom kernel from the lattice literature reproduces the chain
    // comparator through the total-weights engine.
    ProjectionKernel q = ProjectionKernel::from_map(
        g,
        {{"ad", Rational(1, 2)}, {"bd", Rational(1, 2)}, {"de", Rational(1, 3)},
         {"ce", Rational(2, 3)}},
        "custom");
    auto shq = shapley_total_weights(g, q, v);
    detail::expect_rational(rep, "custom-kernel Sh_a", Rational(5, 3), shq.at("a"));
    detail::expect_rational(rep, "custom-kernel Sh_b", Rational(5, 3), shq.at("b"));
    detail::expect_rational(rep, "custom-kernel Sh_c", Rational(11, 3), shq.at("c"));
    return rep;
}

inline DemoReport demo_poset_game() {
    DemoReport rep{"poset-game", {}};
    auto g = hasse_damg(PosetSpec{{"a", "b", "c", "d"},
                                  {{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}}});
    auto mu = moebius_function(g);
    for (const auto& [x, y] :
         std::vector<std::pair<std::string, std::string>>{{"a", "c"}, {"a", "d"}, {"b", "c"},
                                                          {"b", "d"}})
        detail::expect_rational(rep, "mu(" + x + "," + y + ")", Rational(-1), mu.at(x, y));
    ValueFunction<Rational> v(
        g, std::map<std::string, Rational>{{"a", 2}, {"b", 1}, {"c", 4}, {"d", 5}});
    auto sh = shapley_path_uniform(g, v);
    detail::expect_rational(rep, "Sh_a", Rational(7, 2), sh.at("a"));
    detail::expect_rational(rep, "Sh_b", Rational(5, 2), sh.at("b"));
    return rep;
}

inline DemoReport demo_ising() {
    DemoReport rep{"ising", {}};
    auto attribution_at = [](const Rational& j_bcd, const Rational& beta) {
        IsingSpec spec;
        spec.spins = {"a", "b", "c", "d"};
        spec.interactions[{"a", "b"}] = 1;
        spec.interactions[{"a", "c"}] = 1;
        spec.interactions[{"a", "d"}] = 1;
        spec.interactions[{"b", "c", "d"}] = j_bcd;
        spec.beta = beta;
        auto [g, v] = ising_game(spec);
        return shapley_path_uniform(g, v);
    };
    int crossing_low = -1, crossing_high = -1;
    for (int x = 0; x <= 6; ++x) {
        auto sh = attribution_at(Rational(x), Rational(1));
        const Rational &a = sh.at("a"), &d = sh.at("d");
        std::string relation = a > d ? ">" : (a == d ? "=" : "<");
        std::string expected = x < 3 ? ">" : (x == 3 ? "=" : "<");
        std::ostringstream name;
        name << "Sh_a " << relation << " Sh_d @ J_bcd=" << x << " (ratio "
             << to_decimal_string(a / d, 4) << ")";
        rep.rows.push_back({name.str(), "Sh_a " + expected + " Sh_d", "Sh_a " + relation + " Sh_d",
                            relation == expected});
        if (relation == ">") crossing_low = x;
        if (relation == "<" && crossing_high < 0) crossing_high = x;
    }
    rep.rows.push_back({"crossing bracketed", "between 2 and 4",
                        "between " + std::to_string(crossing_low) + " and " +
                            std::to_string(crossing_high),
                        crossing_low == 2 && crossing_high == 4});
    auto frozen = attribution_at(Rational(2), Rational(0));
    bool all_zero = true;
    for (const auto& [_, val] : frozen.per_root) all_zero = all_zero && val == 0;
    rep.rows.push_back({"beta=0 attributions", "all zero", all_zero ? "all zero" : "nonzero",
                        all_zero});
    return rep;
}

inline DemoReport demo_coalition() {
    DemoReport rep{"coalition", {}};
    CoalitionPartition part{{"a", "b", "c", "d", "e"}, {{"a", "b"}, {"c"}, {"d"}, {"e"}}};
    auto g = coalition_damg(part);
    auto sigma = EdgeWeights::ones(g);
    const std::string r1 = "a|b";

    // tau = 1: Grabisch coefficients 1/(|y| - |r1| + 1) on y containing r1.
    auto q1 = induced_kernel(g, sigma, RootWeights::ones(g));
    auto s1 = kernel_total_weights(g, q1);
    int r1_idx = g->index_of(r1);
    for (int y = 0; y < g->size(); ++y) {
        if (!g->is_ancestor(r1_idx, y)) continue;
        auto members = damg::detail::split_members(g->label(y));
        Rational expected(1, static_cast<long long>(members.size()) - 2 + 1);
        detail::expect_rational(rep, "tau=1 s(a|b ; " + g->label(y) + ")", expected,
                                s1.at(r1_idx, y));
    }

    // tau(r) = |r|: coefficients |r| / |y| for every root and y above it.
    std::map<std::string, Rational> tau_sizes;
    for (int r : g->roots())
        tau_sizes.emplace(g->label(r), Rational(static_cast<long long>(
                                           damg::detail::split_members(g->label(r)).size())));
    auto q2 = induced_kernel(g, sigma, RootWeights(g, tau_sizes));
    auto s2 = kernel_total_weights(g, q2);
    bool all_match = true;
    for (int r : g->roots()) {
        auto rsize = damg::detail::split_members(g->label(r)).size();
        for (int y = 0; y < g->size(); ++y) {
            if (!g->is_ancestor(r, y)) continue;
            auto ysize = damg::detail::split_members(g->label(y)).size();
            all_match = all_match && s2.at(r, y) == Rational(static_cast<long long>(rsize),
                                                             static_cast<long long>(ysize));
        }
    }
    rep.rows.push_back({"tau=|r| coefficients", "|r|/|y| for all r, y >= r",
                        all_match ? "all match" : "mismatch", all_match});
    return rep;
}

inline DemoReport demo_classic() {
    DemoReport rep{"classic", {}};
    auto g = power_set_damg({"a", "b", "c", "d"});
    std::mt19937_64 rng(20250810);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    std::vector<Rational> vals(g->size());
    for (auto& v : vals) v = Rational(num(rng), den(rng));
    ValueFunction<Rational> v(g, vals);
    auto ours = shapley_path_uniform(g, v);
    auto oracle = classic_shapley_oracle(v);  // self-checks both classic forms
    for (const auto& [root, val] : oracle.per_root)
        detail::expect_rational(rep, "Sh_" + root + " (path-uniform vs classic)", val,
                                ours.at(root));
    return rep;
}

inline DemoReport cmd_demo(const std::string& name) {
    if (name == "figure1") return demo_figure1();
    if (name == "reverse-tree") return demo_reverse_tree();
    if (name == "poset-game") return demo_poset_game();
    if (name == "ising") return demo_ising();
    if (name == "coalition") return demo_coalition();
    if (name == "classic") return demo_classic();
    throw UnknownDemoError(name);
}

inline std::string render_demo(const DemoReport& rep, const RenderOptions& opts) {
    if (opts.format == "tsv") {
        std::ostringstream os;
        for (const auto& r : rep.rows)
            os << (r.pass ? "PASS" : "FAIL") << "\t" << r.name << "\t" << r.expected << "\t"
               << r.actual << "\n";
        return os.str();
    }
    if (opts.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rep.rows)
            arr.push_back({{"check", r.name},
                           {"expected", r.expected},
                           {"actual", r.actual},
                           {"result", r.pass ? "PASS" : "FAIL"}});
        nlohmann::json j{{"demo", rep.demo}, {"rows", std::move(arr)},
                         {"result", rep.all_pass() ? "PASS" : "FAIL"}};
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "demo: " << rep.demo << "\n";
    for (const auto& r : rep.rows)
        os << "  [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name << ": expected " << r.expected
           << ", got " << r.actual << "\n";
    os << (rep.all_pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace damg::cli
