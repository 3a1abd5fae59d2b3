#pragma once

// Polynomial differential forms on standard simplices.
//
// Coordinates are canonical: on the n-simplex the barycentric relation
// sum t_i = 1 eliminates t_0 (and dt_0 = -sum dt_i), leaving free variables
// t_1..t_n.  A form is a finite sum  p_S(t) dt_S  over subsets S of {1..n},
// stored as a map from the dt bitmask (bit i-1 <-> dt_i) to a polynomial
// coefficient.  Normal forms are unique, so equality is map equality.
//
// Every form carries a polynomial degree cap; products that would exceed it
// raise DegreeBudgetExceeded.  The cap is a resource guard, not a quotient:
// arithmetic below the cap is exact.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "defo/errors.hpp"
#include "defo/mpoly.hpp"
#include "defo/rational.hpp"

namespace defo::forms {

using exactalg::MPoly;
using exactalg::Rational;

class PolyForm {
public:
    PolyForm() : n_(0), cap_(0) {}
    PolyForm(std::size_t n, unsigned degree_cap) : n_(n), cap_(degree_cap) {}

    static PolyForm scalar(std::size_t n, unsigned cap, const Rational& c);
    // A 0-form from a polynomial in the simplex variables.
    static PolyForm from_poly(std::size_t n, unsigned cap, const MPoly& p);
    // coeff * dt_S for the given bitmask.
    static PolyForm term(std::size_t n, unsigned cap, const MPoly& coeff, std::uint32_t dt_mask);

    std::size_t simplex_dim() const { return n_; }
    unsigned cap() const { return cap_; }
    const std::map<std::uint32_t, MPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    MPoly coefficient(std::uint32_t dt_mask) const;

    // |S| when every stored term has the same |S| (the zero form reports 0).
    std::optional<unsigned> form_degree() const;

    // The value of a 0-form on the 0-simplex.
    Rational scalar_value() const;

    PolyForm& operator+=(const PolyForm& o);
    PolyForm& operator-=(const PolyForm& o);
    friend PolyForm operator+(PolyForm a, const PolyForm& b) { a += b; return a; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { a -= b; return a; }
    PolyForm operator-() const;
    PolyForm scaled(const Rational& c) const;
    friend bool operator==(const PolyForm& a, const PolyForm& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const PolyForm& a, const PolyForm& b) { return !(a == b); }

    void add_term(std::uint32_t dt_mask, const MPoly& coeff);  // canonicalizing

private:
    std::size_t n_;
    unsigned cap_;
    std::map<std::uint32_t, MPoly> terms_;

    void check_cap(const MPoly& p) const;
};

// Graded-commutative product with Koszul signs on the dt factors.
PolyForm omega_mul(const PolyForm& f, const PolyForm& g);

// de Rham differential: d(t_i) = dt_i extended as a degree-1 derivation.
PolyForm omega_d(const PolyForm& f);

// Pullback along the k-th coface (insert barycentric 0 at slot k), mapping
// forms on the n-simplex to forms on the (n-1)-simplex.
PolyForm face(unsigned k, const PolyForm& f);

// Integral over the n-simplex of a top-degree form, orientation dt_1..dt_n.
Rational integrate(const PolyForm& f);

// Elementary form of the vertex set i_0 < ... < i_k (indices up to n):
// k! * sum_j (-1)^j t_{i_j} dt_{i_0} ^ ... omit j ... ^ dt_{i_k}.
PolyForm whitney_form(std::size_t n, unsigned cap, const std::vector<unsigned>& indices);

// Pullback of a form on the 2-simplex to its edge from vertex 0 to vertex 1
// (barycentric (t_0, t_1, t_2) = (t, 1-t, 0)); equals face(2, f).
PolyForm restrict_edge(const PolyForm& f);

// Exact division of every coefficient by a scalar polynomial; NotDivisible
// when a coefficient is not a multiple.
PolyForm poly_divide(const PolyForm& f, const MPoly& g);

// Barycentric coordinate t_i as a polynomial in the canonical variables
// (i = 0 expands to 1 - t_1 - ... - t_n).
MPoly bary_t(std::size_t n, unsigned i);

// Barycentric differential dt_i as canonical dt-coefficients (length n);
// dt_0 = -(dt_1 + ... + dt_n).
std::vector<Rational> bary_dt(std::size_t n, unsigned i);

} // namespace defo::forms
