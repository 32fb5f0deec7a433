#pragma once

#include <map>
#include <utility>
#include <vector>

#include "damg/graph.hpp"
#include "damg/rational.hpp"

namespace damg {

/// Scalar function on ancestor pairs of a DAMG: f(x,y) may be nonzero only
/// when x is an ancestor of y. Under the fixed topological order this is a
/// lower-triangular matrix; stored dense up to `kDenseLimit` vertices and as
/// map-of-rows above. Houses delta, zeta, mu, pi, sigma and s.
class PathAlgebraElement {
  public:
    static constexpr int kDenseLimit = 2048;

    explicit PathAlgebraElement(DamgPtr base) : base_(std::move(base)) {
        const int n = base_->size();
        dense_mode_ = n <= kDenseLimit;
        if (dense_mode_)
            dense_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, Rational(0));
        else
            rows_.assign(n, {});
    }

    const DamgPtr& base() const { return base_; }

    /// f(x, y); zero outside the ancestor support.
    const Rational& at(int x, int y) const {
        static const Rational kZero(0);
        if (x > y) return kZero;
        if (dense_mode_) return dense_[tri(y) + x];
        auto it = rows_[y].find(x);
        return it == rows_[y].end() ? kZero : it->second;
    }
    const Rational& at(const std::string& x, const std::string& y) const {
        return at(base_->index_of(x), base_->index_of(y));
    }

    void set(int x, int y, Rational value) {
        if (value != 0 && !base_->is_ancestor(x, y))
            throw Error("path algebra support violation: " + base_->label(x) +
                        " is not an ancestor of " + base_->label(y));
        if (dense_mode_) {
            dense_[tri(y) + x] = std::move(value);
        } else {
            if (value == 0)
                rows_[y].erase(x);
            else
                rows_[y][x] = std::move(value);
        }
    }

    friend bool operator==(const PathAlgebraElement& a, const PathAlgebraElement& b) {
        if (!(*a.base_ == *b.base_)) return false;
        const int n = a.base_->size();
        for (int y = 0; y < n; ++y)
            for (int x = 0; x <= y; ++x)
                if (a.at(x, y) != b.at(x, y)) return false;
        return true;
    }

  private:
    static std::size_t tri(int y) { return static_cast<std::size_t>(y) * (y + 1) / 2; }

    DamgPtr base_;
    bool dense_mode_ = true;
    std::vector<Rational> dense_;
    std::vector<std::map<int, Rational>> rows_;
};

inline PathAlgebraElement delta(const DamgPtr& g) {
    PathAlgebraElement d(g);
    for (int v = 0; v < g->size(); ++v) d.set(v, v, Rational(1));
    return d;
}

inline PathAlgebraElement zeta(const DamgPtr& g) {
    PathAlgebraElement z(g);
    for (int y = 0; y < g->size(); ++y) {
        const auto& anc = g->ancestors(y);
        for (auto x = anc.find_first(); x != Bitset::npos; x = anc.find_next(x))
            z.set(static_cast<int>(x), y, Rational(1));
    }
    return z;
}

/// Path convolution (f * g)(x,y) = sum_z f(x,z) g(z,y). Associative with
/// identity delta; preserves the ancestor support.
inline PathAlgebraElement convolve(const PathAlgebraElement& f, const PathAlgebraElement& g) {
    if (!(*f.base() == *g.base())) throw BaseMismatchError();
    const DamgPtr& base = f.base();
    PathAlgebraElement out(base);
    const int n = base->size();
    for (int y = 0; y < n; ++y) {
        const auto& anc_y = base->ancestors(y);
        for (auto zb = anc_y.find_first(); zb != Bitset::npos; zb = anc_y.find_next(zb)) {
            const int z = static_cast<int>(zb);
            const Rational& gz = g.at(z, y);
            if (gz == 0) continue;
            const auto& anc_z = base->ancestors(z);
            for (auto xb = anc_z.find_first(); xb != Bitset::npos; xb = anc_z.find_next(xb)) {
                const int x = static_cast<int>(xb);
                const Rational& fx = f.at(x, z);
                if (fx == 0) continue;
                out.set(x, y, out.at(x, y) + fx * gz);
            }
        }
    }
    return out;
}

/// Moebius function of the underlying DAG. Depends on ancestor sets only,
/// so parallel edges do not affect it (coarse inversion).
inline PathAlgebraElement moebius_function(const DamgPtr& g) {
    PathAlgebraElement mu(g);
    const int n = g->size();
    for (int x = 0; x < n; ++x) {
        const auto& dx = g->descendants(x);
        mu.set(x, x, Rational(1));
        for (auto yb = dx.find_next(x); yb != Bitset::npos; yb = dx.find_next(yb)) {
            const int y = static_cast<int>(yb);
            Bitset zs = dx & g->ancestors(y);
            zs.reset(y);
            Rational acc(0);
            for (auto z = zs.find_first(); z != Bitset::npos; z = zs.find_next(z))
                acc += mu.at(x, static_cast<int>(z));
            mu.set(x, y, -acc);
        }
    }
    return mu;
}

/// pi as a path-algebra element plus the aggregated vector pi(y).
struct PathCounts {
    PathAlgebraElement matrix;
    std::vector<Rational> totals;
};

inline PathCounts path_counts(const DamgPtr& g) {
    PathAlgebraElement m(g);
    for (int x = 0; x < g->size(); ++x) {
        auto row = path_count_row(*g, x);
        const auto& dx = g->descendants(x);
        for (auto y = dx.find_first(); y != Bitset::npos; y = dx.find_next(y))
            m.set(x, static_cast<int>(y), row[y]);
    }
    return PathCounts{std::move(m), path_count_totals(*g)};
}

}  // namespace damg
