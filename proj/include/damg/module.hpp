#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "damg/errors.hpp"
#include "damg/rational.hpp"

namespace damg {

/// Fixed-length vector over a scalar S, used as an abelian-group / module
/// value. All componentwise operations require equal dimensions.
template <class S>
struct Vec {
    std::vector<S> comps;

    Vec() = default;
    explicit Vec(std::vector<S> c) : comps(std::move(c)) {}
    Vec(std::initializer_list<S> c) : comps(c) {}
    static Vec zeros(std::size_t dim) { return Vec(std::vector<S>(dim, S(0))); }

    std::size_t dim() const { return comps.size(); }
    const S& operator[](std::size_t i) const { return comps[i]; }
    S& operator[](std::size_t i) { return comps[i]; }

    friend Vec operator+(const Vec& a, const Vec& b) {
        if (a.dim() != b.dim()) throw DimensionMismatchError(a.dim(), b.dim());
        Vec r = a;
        for (std::size_t i = 0; i < r.dim(); ++i) r.comps[i] += b.comps[i];
        return r;
    }
    friend Vec operator-(const Vec& a, const Vec& b) {
        if (a.dim() != b.dim()) throw DimensionMismatchError(a.dim(), b.dim());
        Vec r = a;
        for (std::size_t i = 0; i < r.dim(); ++i) r.comps[i] -= b.comps[i];
        return r;
    }
    friend Vec operator-(const Vec& a) {
        Vec r = a;
        for (auto& c : r.comps) c = -c;
        return r;
    }
    Vec& operator+=(const Vec& b) { return *this = *this + b; }
    Vec& operator-=(const Vec& b) { return *this = *this - b; }
    friend bool operator==(const Vec& a, const Vec& b) { return a.comps == b.comps; }
};

using VecQ = Vec<Rational>;
using VecD = Vec<double>;

// zero_like: zero with the same shape as the argument.
inline Rational zero_like(const Rational&) { return Rational(0); }
inline double zero_like(const double&) { return 0.0; }
template <class S>
Vec<S> zero_like(const Vec<S>& v) { return Vec<S>::zeros(v.dim()); }

// scale: scalar action of the module's own scalar ring.
inline Rational scale(const Rational& c, const Rational& a) { return c * a; }
inline double scale(const double& c, const double& a) { return c * a; }
template <class S>
Vec<S> scale(const S& c, const Vec<S>& a) {
    Vec<S> r = a;
    for (auto& x : r.comps) x = c * x;
    return r;
}

template <class A>
struct scalar_of { using type = A; };
template <class S>
struct scalar_of<Vec<S>> { using type = S; };
template <class A>
using scalar_of_t = typename scalar_of<A>::type;

/// Values a ValueFunction may hold: closed under +, -, comparison,
/// shaped zero, and scaling by the module's scalar ring.
template <class A>
concept ModuleValue = requires(const A& a, const A& b, const scalar_of_t<A>& c) {
    { a + b } -> std::convertible_to<A>;
    { a - b } -> std::convertible_to<A>;
    { a == b } -> std::convertible_to<bool>;
    { zero_like(a) } -> std::convertible_to<A>;
    { scale(c, a) } -> std::convertible_to<A>;
};

/// Modules over the exact rationals; the only kind the attribution engines
/// accept (float-valued games must be converted explicitly first).
template <class A>
concept RationalModule = ModuleValue<A> && std::same_as<scalar_of_t<A>, Rational>;

// Explicit exact conversions between the two scalar kinds.
inline Rational to_rational_value(const double& x) { return rational_from_double(x); }
inline VecQ to_rational_value(const VecD& v) {
    VecQ r;
    r.comps.reserve(v.dim());
    for (double c : v.comps) r.comps.push_back(rational_from_double(c));
    return r;
}
inline double to_double_value(const Rational& x) { return x.convert_to<double>(); }
inline VecD to_double_value(const VecQ& v) {
    VecD r;
    r.comps.reserve(v.dim());
    for (const auto& c : v.comps) r.comps.push_back(c.convert_to<double>());
    return r;
}

}  // namespace damg
