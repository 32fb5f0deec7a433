#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "damg/graph.hpp"
#include "damg/module.hpp"
#include "damg/value_function.hpp"
#include "damg/weights.hpp"

namespace damg {

/// Self-describing document for a graph with optional weights, values and
/// kernel. JSON-shaped, UTF-8, field order insensitive; rationals are "p/q"
/// strings or integer literals, parsed exactly.
struct GraphDocument {
    struct EdgeEntry {
        std::string id, tail, head;
        std::optional<Rational> weight;
    };
    enum class KernelKind { none, path_uniform, edge_uniform, induced, explicit_map };

    std::vector<std::string> vertices;
    std::vector<EdgeEntry> edges;
    std::optional<std::map<std::string, Rational>> root_weights;
    std::optional<std::map<std::string, std::vector<Rational>>> values;
    bool scalar_values = true;  // meaningful only when values are present
    KernelKind kernel_kind = KernelKind::none;
    std::map<std::string, Rational> kernel_weights;  // for explicit_map
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline Rational rational_field(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()));
    if (j.is_number_unsigned()) return Rational(BigInt(j.get<unsigned long long>()));
    throw ParseError(where + " must be a rational string or integer");
}

}  // namespace detail

inline GraphDocument parse_document(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(e.what(), line, col);
    }
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    GraphDocument doc;
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw ParseError("missing \"vertices\" array");
    for (const auto& v : j["vertices"]) {
        if (!v.is_string()) throw ParseError("vertex labels must be strings");
        doc.vertices.push_back(v.get<std::string>());
    }
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw ParseError("\"edges\" must be an array");
        for (const auto& e : j["edges"]) {
            if (!e.is_object() || !e.contains("id") || !e.contains("tail") || !e.contains("head"))
                throw ParseError("each edge needs id, tail and head");
            GraphDocument::EdgeEntry entry;
            entry.id = e["id"].get<std::string>();
            entry.tail = e["tail"].get<std::string>();
            entry.head = e["head"].get<std::string>();
            if (e.contains("weight"))
                entry.weight = detail::rational_field(e["weight"], "edge weight");
            doc.edges.push_back(std::move(entry));
        }
    }
    if (j.contains("root_weights")) {
        if (!j["root_weights"].is_object()) throw ParseError("\"root_weights\" must be an object");
        std::map<std::string, Rational> rw;
        for (auto& [k, v] : j["root_weights"].items())
            rw.emplace(k, detail::rational_field(v, "root weight"));
        doc.root_weights = std::move(rw);
    }
    if (j.contains("values")) {
        if (!j["values"].is_object()) throw ParseError("\"values\" must be an object");
        std::map<std::string, std::vector<Rational>> vals;
        int arity = -1;  // -1 unknown, 0 scalar, >0 vector dimension
        for (auto& [k, v] : j["values"].items()) {
            std::vector<Rational> entry;
            int this_arity;
            if (v.is_array()) {
                for (const auto& c : v) entry.push_back(detail::rational_field(c, "value"));
                this_arity = static_cast<int>(entry.size());
                if (this_arity == 0) throw ParseError("empty value vector for " + k);
            } else {
                entry.push_back(detail::rational_field(v, "value"));
                this_arity = 0;
            }
            if (arity == -1)
                arity = this_arity;
            else if (arity != this_arity)
                throw ParseError("value shapes differ at " + k);
            vals.emplace(k, std::move(entry));
        }
        doc.scalar_values = (arity <= 0);
        doc.values = std::move(vals);
    }
    if (j.contains("kernel")) {
        const auto& k = j["kernel"];
        if (k.is_string()) {
            const std::string name = k.get<std::string>();
            if (name == "path-uniform")
                doc.kernel_kind = GraphDocument::KernelKind::path_uniform;
            else if (name == "edge-uniform")
                doc.kernel_kind = GraphDocument::KernelKind::edge_uniform;
            else if (name == "induced")
                doc.kernel_kind = GraphDocument::KernelKind::induced;
            else
                throw ParseError("unknown kernel name: " + name);
        } else if (k.is_object()) {
            doc.kernel_kind = GraphDocument::KernelKind::explicit_map;
            for (auto& [id, v] : k.items())
                doc.kernel_weights.emplace(id, detail::rational_field(v, "kernel weight"));
        } else {
            throw ParseError("\"kernel\" must be a name or an edge-weight object");
        }
    }
    return doc;
}

/// Canonical serialization: edges sorted by id, object keys sorted,
/// rationals as exact strings. parse . serialize . parse == parse.
inline std::string serialize_document(const GraphDocument& doc) {
    nlohmann::json j;
    j["vertices"] = doc.vertices;
    auto edges = doc.edges;
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges) {
        nlohmann::json je{{"id", e.id}, {"tail", e.tail}, {"head", e.head}};
        if (e.weight) je["weight"] = to_string(*e.weight);
        j["edges"].push_back(std::move(je));
    }
    if (doc.root_weights) {
        nlohmann::json rw = nlohmann::json::object();
        for (const auto& [k, v] : *doc.root_weights) rw[k] = to_string(v);
        j["root_weights"] = std::move(rw);
    }
    if (doc.values) {
        nlohmann::json vals = nlohmann::json::object();
        for (const auto& [k, v] : *doc.values) {
            if (doc.scalar_values) {
                vals[k] = to_string(v.front());
            } else {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& c : v) arr.push_back(to_string(c));
                vals[k] = std::move(arr);
            }
        }
        j["values"] = std::move(vals);
    }
    switch (doc.kernel_kind) {
        case GraphDocument::KernelKind::none:
            break;
        case GraphDocument::KernelKind::path_uniform:
            j["kernel"] = "path-uniform";
            break;
        case GraphDocument::KernelKind::edge_uniform:
            j["kernel"] = "edge-uniform";
            break;
        case GraphDocument::KernelKind::induced:
            j["kernel"] = "induced";
            break;
        case GraphDocument::KernelKind::explicit_map: {
            nlohmann::json kw = nlohmann::json::object();
            for (const auto& [id, v] : doc.kernel_weights) kw[id] = to_string(v);
            j["kernel"] = std::move(kw);
            break;
        }
    }
    return j.dump(2) + "\n";
}

inline DamgPtr document_graph(const GraphDocument& doc) {
    std::vector<Damg::EdgeSpec> specs;
    for (const auto& e : doc.edges) specs.push_back({e.id, e.tail, e.head});
    return build_damg(doc.vertices, specs);
}

/// Edge strengths from the document's weight fields; absent weights default
/// to one (the standard weighting). Returns nothing when no edge
/// carries a weight.
inline std::optional<EdgeWeights> document_edge_weights(const GraphDocument& doc,
                                                        const DamgPtr& g) {
    bool any = false;
    for (const auto& e : doc.edges) any = any || e.weight.has_value();
    if (!any) return std::nullopt;
    std::map<std::string, Rational> by_id;
    for (const auto& e : doc.edges)
        if (e.weight) by_id.emplace(e.id, *e.weight);
    return EdgeWeights::from_map(g, by_id, Rational(1));
}

inline std::optional<RootWeights> document_root_weights(const GraphDocument& doc,
                                                        const DamgPtr& g) {
    if (!doc.root_weights) return std::nullopt;
    return RootWeights(g, *doc.root_weights);
}

using DocumentValues =
    std::variant<std::monostate, ValueFunction<Rational>, ValueFunction<VecQ>>;

inline DocumentValues document_values(const GraphDocument& doc, const DamgPtr& g) {
    if (!doc.values) return std::monostate{};
    if (doc.scalar_values) {
        std::map<std::string, Rational> m;
        for (const auto& [k, v] : *doc.values) m.emplace(k, v.front());
        return ValueFunction<Rational>(g, m);
    }
    std::map<std::string, VecQ> m;
    for (const auto& [k, v] : *doc.values) m.emplace(k, VecQ(v));
    return ValueFunction<VecQ>(g, m);
}

}  // namespace damg
