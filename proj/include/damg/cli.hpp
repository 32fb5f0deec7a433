#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "damg/graph_doc.hpp"
#include "damg/path_algebra.hpp"
#include "damg/projection.hpp"
#include "damg/shapley.hpp"

namespace damg::cli {

enum class Engine { recursive, total_weights, path_uniform, weighted };
enum class KernelChoice { from_doc, path_uniform, edge_uniform, induced, file };

struct RenderOptions {
    std::string format = "json";  // json | tsv
    bool as_float = false;
};

inline std::string render_rational(const Rational& r, const RenderOptions& opts) {
    return opts.as_float ? to_decimal_string(r) : to_string(r);
}

/// Kernel selection: an explicit --kernel flag wins, then the document's
/// kernel section, then path-uniform.
inline ProjectionKernel resolve_kernel(const GraphDocument& doc, const DamgPtr& g,
                                       KernelChoice choice) {
    auto induced_from_doc = [&] {
        EdgeWeights sigma =
            document_edge_weights(doc, g).value_or(EdgeWeights::ones(g));
        RootWeights tau = document_root_weights(doc, g).value_or(RootWeights::ones(g));
        return induced_kernel(g, sigma, tau);
    };
    switch (choice) {
        case KernelChoice::path_uniform:
            return path_uniform_kernel(g);
        case KernelChoice::edge_uniform:
            return edge_uniform_kernel(g);
        case KernelChoice::induced:
            return induced_from_doc();
        case KernelChoice::file:
            if (doc.kernel_kind != GraphDocument::KernelKind::explicit_map)
                throw Error("--kernel file requires an explicit kernel map in the document");
            return ProjectionKernel::from_map(g, doc.kernel_weights);
        case KernelChoice::from_doc:
            break;
    }
    switch (doc.kernel_kind) {
        case GraphDocument::KernelKind::edge_uniform:
            return edge_uniform_kernel(g);
        case GraphDocument::KernelKind::induced:
            return induced_from_doc();
        case GraphDocument::KernelKind::explicit_map:
            return ProjectionKernel::from_map(g, doc.kernel_weights);
        case GraphDocument::KernelKind::none:
        case GraphDocument::KernelKind::path_uniform:
            break;
    }
    return path_uniform_kernel(g);
}

// ---------------------------------------------------------------- moebius

struct MoebiusResult {
    std::vector<std::pair<std::string, std::vector<Rational>>> rows;  // topo order
    bool scalar = true;
    bool inverted = false;
};

inline MoebiusResult cmd_moebius(const GraphDocument& doc, bool invert) {
    DamgPtr g = document_graph(doc);
    auto vals = document_values(doc, g);
    if (std::holds_alternative<std::monostate>(vals)) throw ParseError("values required");
    MoebiusResult res;
    res.inverted = invert;
    auto fill = [&](const auto& vf) {
        auto out = invert ? inverse_moebius(vf) : moebius_transform(vf);
        for (int x = 0; x < g->size(); ++x) {
            const auto& val = out.value(x);
            if constexpr (std::is_same_v<std::decay_t<decltype(val)>, Rational>) {
                res.rows.emplace_back(g->label(x), std::vector<Rational>{val});
                res.scalar = true;
            } else {
                res.rows.emplace_back(g->label(x), val.comps);
                res.scalar = false;
            }
        }
    };
    if (auto* s = std::get_if<ValueFunction<Rational>>(&vals))
        fill(*s);
    else
        fill(std::get<ValueFunction<VecQ>>(vals));
    return res;
}

inline std::string render_value(const std::vector<Rational>& comps, bool scalar,
                                const RenderOptions& opts) {
    if (scalar) return render_rational(comps.front(), opts);
    std::string s = "[";
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) s += ",";
        s += render_rational(comps[i], opts);
    }
    return s + "]";
}

inline std::string render_moebius(const MoebiusResult& res, const RenderOptions& opts) {
    if (opts.format == "tsv") {
        std::ostringstream os;
        os << "vertex\t" << (res.inverted ? "value" : "synergy") << "\n";
        for (const auto& [label, comps] : res.rows)
            os << label << "\t" << render_value(comps, res.scalar, opts) << "\n";
        return os.str();
    }
    nlohmann::json j;
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [label, comps] : res.rows) {
        if (res.scalar) {
            table[label] = render_rational(comps.front(), opts);
        } else {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& c : comps) arr.push_back(render_rational(c, opts));
            table[label] = std::move(arr);
        }
    }
    j[res.inverted ? "values" : "synergy"] = std::move(table);
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- shapley

struct AttributionReport {
    std::vector<std::pair<std::string, std::vector<Rational>>> per_root;  // label order
    bool scalar = true;
    std::string engine;
    std::string kernel;
    std::vector<Rational> shapley_total, synergy_total;  // efficiency checksums
    std::vector<std::string> vertex_order;
    // s(r|y) rows per root, aligned with vertex_order; filled by --table
    std::optional<std::vector<std::pair<std::string, std::vector<Rational>>>> table;
};

namespace detail {

template <RationalModule A>
std::vector<Rational> flatten(const A& a) {
    if constexpr (std::is_same_v<A, Rational>)
        return {a};
    else
        return a.comps;
}

template <RationalModule A>
AttributionReport make_report(const DamgPtr& g, const Attribution<A>& attr,
                              const ValueFunction<A>& v, bool want_table,
                              const std::vector<std::pair<std::string, std::vector<Rational>>>*
                                  table_rows) {
    AttributionReport rep;
    rep.scalar = std::is_same_v<A, Rational>;
    rep.engine = attr.engine;
    rep.kernel = attr.kernel_provenance;
    for (const auto& [label, val] : attr.per_root) rep.per_root.emplace_back(label, flatten(val));
    rep.shapley_total = flatten(attr.total(v.zero()));
    rep.synergy_total = flatten(moebius_transform(v).total());
    if (rep.shapley_total != rep.synergy_total)
        throw Error("efficiency checksum mismatch (engine bug)");
    for (int x = 0; x < g->size(); ++x) rep.vertex_order.push_back(g->label(x));
    if (want_table && table_rows) rep.table = *table_rows;
    return rep;
}

}  // namespace detail

inline AttributionReport cmd_shapley(const GraphDocument& doc, Engine engine,
                                     KernelChoice kernel_choice, bool want_table) {
    DamgPtr g = document_graph(doc);
    auto vals = document_values(doc, g);
    if (std::holds_alternative<std::monostate>(vals)) throw ParseError("values required");

    auto run = [&](const auto& vf) -> AttributionReport {
        using A = std::decay_t<decltype(vf.value(0))>;
        std::vector<std::pair<std::string, std::vector<Rational>>> table_rows;
        Attribution<A> attr{g, {}, "", ""};
        if (engine == Engine::weighted) {
            if (kernel_choice != KernelChoice::from_doc && kernel_choice != KernelChoice::induced)
                throw Error("--engine weighted uses the induced kernel; conflicting --kernel");
            EdgeWeights sigma = document_edge_weights(doc, g).value_or(EdgeWeights::ones(g));
            RootWeights tau = document_root_weights(doc, g).value_or(RootWeights::ones(g));
            attr = shapley_weighted(g, sigma, tau, vf);
            if (want_table) {
                auto strengths = extend_root_weights(g, sigma, tau);
                for (int r : g->roots()) {
                    auto row = damg::detail::total_weights_row(*g, sigma.per_edge(), r);
                    std::vector<Rational> cells;
                    for (int y = 0; y < g->size(); ++y)
                        cells.push_back(strengths[r] / strengths[y] * row[y]);
                    table_rows.emplace_back(g->label(r), std::move(cells));
                }
            }
        } else if (engine == Engine::path_uniform) {
            auto effective = resolve_kernel(doc, g, kernel_choice);
            if (effective.provenance() != "path-uniform")
                throw Error("--engine path-uniform conflicts with kernel " +
                            effective.provenance());
            attr = shapley_path_uniform(g, vf);
            if (want_table) {
                auto pi = path_count_totals(*g);
                for (int r : g->roots()) {
                    auto row = path_count_row(*g, r);
                    std::vector<Rational> cells;
                    for (int y = 0; y < g->size(); ++y) cells.push_back(row[y] / pi[y]);
                    table_rows.emplace_back(g->label(r), std::move(cells));
                }
            }
        } else {
            ProjectionKernel q = resolve_kernel(doc, g, kernel_choice);
            attr = (engine == Engine::recursive) ? shapley_recursive(g, q, vf)
                                                 : shapley_total_weights(g, q, vf);
            if (want_table) {
                auto s = kernel_total_weights(g, q);
                for (int r : g->roots()) {
                    std::vector<Rational> cells;
                    for (int y = 0; y < g->size(); ++y) cells.push_back(s.at(r, y));
                    table_rows.emplace_back(g->label(r), std::move(cells));
                }
            }
        }
        return detail::make_report(g, attr, vf, want_table, &table_rows);
    };

    if (auto* s = std::get_if<ValueFunction<Rational>>(&vals)) return run(*s);
    return run(std::get<ValueFunction<VecQ>>(vals));
}

inline std::string render_report(const AttributionReport& rep, const RenderOptions& opts) {
    if (opts.format == "tsv") {
        std::ostringstream os;
        os << "root\tshapley\n";
        for (const auto& [label, comps] : rep.per_root)
            os << label << "\t" << render_value(comps, rep.scalar, opts) << "\n";
        os << "#engine\t" << rep.engine << "\n#kernel\t" << rep.kernel << "\n";
        os << "#shapley_total\t" << render_value(rep.shapley_total, rep.scalar, opts) << "\n";
        os << "#synergy_total\t" << render_value(rep.synergy_total, rep.scalar, opts) << "\n";
        if (rep.table) {
            os << "#table\troot";
            for (const auto& v : rep.vertex_order) os << "\t" << v;
            os << "\n";
            for (const auto& [root, cells] : *rep.table) {
                os << "#table\t" << root;
                for (const auto& c : cells) os << "\t" << render_rational(c, opts);
                os << "\n";
            }
        }
        return os.str();
    }
    nlohmann::json j;
    nlohmann::json attribution = nlohmann::json::object();
    for (const auto& [label, comps] : rep.per_root) {
        if (rep.scalar) {
            attribution[label] = render_rational(comps.front(), opts);
        } else {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& c : comps) arr.push_back(render_rational(c, opts));
            attribution[label] = std::move(arr);
        }
    }
    j["attribution"] = std::move(attribution);
    j["engine"] = rep.engine;
    j["kernel"] = rep.kernel;
    j["efficiency"] = {{"shapley_total", render_value(rep.shapley_total, rep.scalar, opts)},
                       {"synergy_total", render_value(rep.synergy_total, rep.scalar, opts)}};
    if (rep.table) {
        nlohmann::json table = nlohmann::json::object();
        for (const auto& [root, cells] : *rep.table) {
            nlohmann::json row = nlohmann::json::object();
            for (std::size_t y = 0; y < cells.size(); ++y)
                if (cells[y] != 0) row[rep.vertex_order[y]] = render_rational(cells[y], opts);
            table[root] = std::move(row);
        }
        j["total_path_weights"] = std::move(table);
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- project

inline GraphDocument cmd_project(const GraphDocument& doc, const std::set<std::string>& selection,
                                 bool onto, std::size_t cap) {
    DamgPtr g = document_graph(doc);
    std::set<std::string> remove;
    if (onto) {
        for (const auto& t : selection) g->index_of(t);
        for (int v = 0; v < g->size(); ++v)
            if (!selection.count(g->label(v))) remove.insert(g->label(v));
    } else {
        for (const auto& z : selection) g->index_of(z);
        remove = selection;
    }
    ProjectionKernel q = resolve_kernel(doc, g, KernelChoice::from_doc);
    auto sigma_in = document_edge_weights(doc, g);
    auto tau_in = document_root_weights(doc, g);

    GraphDocument out;
    DamgPtr projected;
    std::map<std::string, std::vector<Rational>> new_values;
    bool scalar_values = true;
    bool have_values = false;
    ProjectionKernel q_out(g, q.per_edge(), q.provenance());

    auto vals = document_values(doc, g);
    auto handle = [&](const auto& vf) {
        auto w = moebius_transform(vf);
        auto res = project_subset(g, q, w, remove, cap);
        projected = res.graph;
        q_out = res.kernel;
        for (int x = 0; x < projected->size(); ++x) {
            const auto& val = res.value.value(x);
            if constexpr (std::is_same_v<std::decay_t<decltype(val)>, Rational>) {
                new_values.emplace(projected->label(x), std::vector<Rational>{val});
            } else {
                new_values.emplace(projected->label(x), val.comps);
                scalar_values = false;
            }
        }
        have_values = true;
    };
    if (auto* s = std::get_if<ValueFunction<Rational>>(&vals)) {
        handle(*s);
    } else if (auto* vv = std::get_if<ValueFunction<VecQ>>(&vals)) {
        handle(*vv);
    } else {
        std::tie(projected, q_out) = project_kernel(g, q, remove, cap);
    }

    std::optional<EdgeWeights> sigma_out;
    if (sigma_in) {
        auto [sg, sw] = project_edge_weights(g, *sigma_in, remove, cap);
        sigma_out = std::move(sw);
    }

    for (int v = 0; v < projected->size(); ++v) out.vertices.push_back(projected->label(v));
    for (std::size_t i = 0; i < projected->edges().size(); ++i) {
        const Edge& e = projected->edge(static_cast<int>(i));
        GraphDocument::EdgeEntry entry{e.id, projected->label(e.tail), projected->label(e.head),
                                       std::nullopt};
        if (sigma_out) entry.weight = sigma_out->at_edge(static_cast<int>(i));
        out.edges.push_back(std::move(entry));
    }
    if (tau_in) {
        EdgeWeights sigma = sigma_in.value_or(EdgeWeights::ones(g));
        auto strengths = extend_root_weights(g, sigma, *tau_in);
        std::map<std::string, Rational> rw;
        for (int r : projected->roots())
            rw.emplace(projected->label(r), strengths[g->index_of(projected->label(r))]);
        out.root_weights = std::move(rw);
    }
    if (have_values) {
        out.values = std::move(new_values);
        out.scalar_values = scalar_values;
    }
    out.kernel_kind = GraphDocument::KernelKind::explicit_map;
    for (std::size_t i = 0; i < projected->edges().size(); ++i)
        out.kernel_weights.emplace(projected->edge(static_cast<int>(i)).id,
                                   q_out.at_edge(static_cast<int>(i)));
    return out;
}

// ---------------------------------------------------------------- paths

struct PathsResult {
    std::vector<std::pair<std::string, Rational>> totals;  // pi(y), topo order
    std::optional<std::vector<std::pair<std::string, std::vector<Rational>>>> per_root;
    std::vector<std::string> vertex_order;
};

inline PathsResult cmd_paths(const GraphDocument& doc, bool want_table) {
    DamgPtr g = document_graph(doc);
    PathsResult res;
    auto pi = path_count_totals(*g);
    for (int y = 0; y < g->size(); ++y) {
        res.totals.emplace_back(g->label(y), pi[y]);
        res.vertex_order.push_back(g->label(y));
    }
    if (want_table) {
        std::vector<std::pair<std::string, std::vector<Rational>>> rows;
        for (int r : g->roots()) rows.emplace_back(g->label(r), path_count_row(*g, r));
        res.per_root = std::move(rows);
    }
    return res;
}

inline std::string render_paths(const PathsResult& res, const RenderOptions& opts) {
    if (opts.format == "tsv") {
        std::ostringstream os;
        os << "vertex\tpath_count\n";
        for (const auto& [label, pi] : res.totals)
            os << label << "\t" << render_rational(pi, opts) << "\n";
        if (res.per_root) {
            os << "#table\troot";
            for (const auto& v : res.vertex_order) os << "\t" << v;
            os << "\n";
            for (const auto& [root, cells] : *res.per_root) {
                os << "#table\t" << root;
                for (const auto& c : cells) os << "\t" << render_rational(c, opts);
                os << "\n";
            }
        }
        return os.str();
    }
    nlohmann::json j;
    nlohmann::json totals = nlohmann::json::object();
    for (const auto& [label, pi] : res.totals) totals[label] = render_rational(pi, opts);
    j["path_counts"] = std::move(totals);
    if (res.per_root) {
        nlohmann::json table = nlohmann::json::object();
        for (const auto& [root, cells] : *res.per_root) {
            nlohmann::json row = nlohmann::json::object();
            for (std::size_t y = 0; y < cells.size(); ++y)
                if (cells[y] != 0) row[res.vertex_order[y]] = render_rational(cells[y], opts);
            table[root] = std::move(row);
        }
        j["per_root"] = std::move(table);
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- check

struct CheckRow {
    std::string name;
    bool pass = true;
    std::string note;
};

namespace detail {

template <RationalModule A>
void value_checks(const DamgPtr& g, const ProjectionKernel& q, const ValueFunction<A>& vf,
                  std::vector<CheckRow>& rows) {
    auto w = moebius_transform(vf);
    rows.push_back({"moebius-roundtrip",
                    inverse_moebius(w) == vf && moebius_transform(inverse_moebius(w)) == w, ""});
    auto a = shapley_recursive(g, q, vf);
    auto b = shapley_total_weights(g, q, vf);
    bool engines_equal = a.per_root == b.per_root;
    std::string note;
    if (q.provenance() == "path-uniform") {
        engines_equal = engines_equal && a.per_root == shapley_path_uniform(g, vf).per_root;
        note = "recursive = total-weights = path-uniform";
    } else {
        note = "recursive = total-weights";
    }
    rows.push_back({"engine-equivalence", engines_equal, note});
    A total_sh = a.total(vf.zero());
    rows.push_back({"efficiency", total_sh == w.total(), ""});
}

}  // namespace detail

inline std::vector<CheckRow> cmd_check(const GraphDocument& doc) {
    DamgPtr g = document_graph(doc);
    std::vector<CheckRow> rows;
    ProjectionKernel q = resolve_kernel(doc, g, KernelChoice::from_doc);
    rows.push_back({"kernel-normalized", q.normalized(), q.provenance()});

    auto s = kernel_total_weights(g, q);
    bool s_norm = true;
    for (int y = 0; y < g->size() && s_norm; ++y) {
        Rational acc(0);
        for (int r : g->roots()) acc += s.at(r, y);
        s_norm = (acc == 1);
    }
    rows.push_back({"total-weights-normalized", s_norm, "sum over roots of s(r|y) = 1"});

    if (g->size() <= 128) {
        auto d = delta(g);
        auto mu = moebius_function(g);
        auto z = zeta(g);
        rows.push_back(
            {"convolution-identity", convolve(z, mu) == d && convolve(mu, z) == d, ""});
    } else {
        rows.push_back({"convolution-identity", true, "skipped (graph too large)"});
    }

    auto vals = document_values(doc, g);
    if (std::holds_alternative<std::monostate>(vals)) {
        rows.push_back({"moebius-roundtrip", true, "skipped (no values)"});
        rows.push_back({"engine-equivalence", true, "skipped (no values)"});
        rows.push_back({"efficiency", true, "skipped (no values)"});
    } else if (!q.normalized()) {
        rows.push_back({"moebius-roundtrip", true, "skipped (kernel not normalized)"});
        rows.push_back({"engine-equivalence", false, "kernel not normalized"});
        rows.push_back({"efficiency", false, "kernel not normalized"});
    } else if (auto* sv = std::get_if<ValueFunction<Rational>>(&vals)) {
        detail::value_checks(g, q, *sv, rows);
    } else {
        detail::value_checks(g, q, std::get<ValueFunction<VecQ>>(vals), rows);
    }
    return rows;
}

inline std::string render_checks(const std::vector<CheckRow>& rows, const RenderOptions& opts) {
    if (opts.format == "tsv") {
        std::ostringstream os;
        for (const auto& r : rows)
            os << r.name << "\t" << (r.pass ? "PASS" : "FAIL")
               << (r.note.empty() ? "" : "\t" + r.note) << "\n";
        return os.str();
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"check", r.name}, {"result", r.pass ? "PASS" : "FAIL"}};
        if (!r.note.empty()) row["note"] = r.note;
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

}  // namespace damg::cli
