#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace damg {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The edge list admits no topological ordering. Carries one offending cycle.
struct CycleError : Error {
    std::vector<std::string> cycle;
    explicit CycleError(std::vector<std::string> cyc)
        : Error("graph contains a cycle: " + join(cyc)), cycle(std::move(cyc)) {}

  private:
    static std::string join(const std::vector<std::string>& c) {
        std::string s;
        for (const auto& v : c) {
            if (!s.empty()) s += " -> ";
            s += v;
        }
        if (!c.empty()) s += " -> " + c.front();
        return s;
    }
};

struct DuplicateIdError : Error {
    explicit DuplicateIdError(const std::string& id) : Error("duplicate id: " + id) {}
};

struct DanglingEndpointError : Error {
    DanglingEndpointError(const std::string& edge, const std::string& endpoint)
        : Error("edge " + edge + " refers to undeclared vertex " + endpoint) {}
};

struct InvalidIdError : Error {
    explicit InvalidIdError(const std::string& msg) : Error(msg) {}
};

struct UnknownVertexError : Error {
    explicit UnknownVertexError(const std::string& label) : Error("unknown vertex: " + label) {}
};

struct CapExceededError : Error {
    explicit CapExceededError(const std::string& msg) : Error(msg) {}
};

/// tau(y) = 0 for a non-root y: the induced weights q = tau(x)/tau(y) * sigma are undefined.
struct ZeroStrengthError : Error {
    std::string vertex;
    explicit ZeroStrengthError(const std::string& y)
        : Error("zero strength at vertex " + y + "; induced weights are undefined"), vertex(y) {}
};

struct BaseMismatchError : Error {
    BaseMismatchError() : Error("operands are defined on different base graphs") {}
};

struct NotAncestrallyClosedError : Error {
    explicit NotAncestrallyClosedError(const std::string& witness)
        : Error("subset is not ancestrally closed; missing ancestor " + witness) {}
};

struct NotWeakError : Error {
    std::string vertex;
    explicit NotWeakError(const std::string& v, const std::string& reason)
        : Error("vertex " + v + " " + reason), vertex(v) {}
};

struct NotABijectionError : Error {
    explicit NotABijectionError(const std::string& msg) : Error(msg) {}
};

struct KernelNotNormalizedError : Error {
    KernelNotNormalizedError() : Error("projection kernel is not normalized") {}
};

struct TooManyPlayersError : Error {
    explicit TooManyPlayersError(std::size_t n)
        : Error("player count " + std::to_string(n) + " exceeds the oracle guard") {}
};

struct ChainExplosionError : Error {
    explicit ChainExplosionError(std::size_t cap)
        : Error("number of maximal chains exceeds cap " + std::to_string(cap)) {}
};

struct TooLargeError : Error {
    explicit TooLargeError(const std::string& msg) : Error(msg) {}
};

struct NotACoverRelationError : Error {
    NotACoverRelationError(const std::string& lo, const std::string& hi)
        : Error("pair (" + lo + " < " + hi + ") is not a cover relation") {}
};

struct NoUniqueBottomError : Error {
    explicit NoUniqueBottomError(const std::string& msg) : Error(msg) {}
};

struct ProjectionBlowupError : Error {
    explicit ProjectionBlowupError(std::size_t cap)
        : Error("projection would exceed the edge cap " + std::to_string(cap)) {}
};

struct DimensionMismatchError : Error {
    DimensionMismatchError(std::size_t a, std::size_t b)
        : Error("vector dimensions differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// Document-level syntax or schema error, with 1-based line/column when known.
struct ParseError : Error {
    std::size_t line = 0;
    std::size_t column = 0;
    ParseError(const std::string& msg, std::size_t ln, std::size_t col)
        : Error("parse error at " + std::to_string(ln) + ":" + std::to_string(col) + ": " + msg),
          line(ln), column(col) {}
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct UnknownDemoError : Error {
    explicit UnknownDemoError(const std::string& name) : Error("unknown demo: " + name) {}
};

}  // namespace damg
