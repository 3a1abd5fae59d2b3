// Sparse multivariate polynomials over Q with exact arithmetic.
//
// Terms are kept in a std::map keyed by exponent vector (plain
// lexicographic key order — storage order is independent of any monomial
// order used by Groebner routines).  Polynomials know their variable count;
// mixing different variable counts is an error.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "defo/rational.hpp"

namespace defo::exactalg {

using Expo = std::vector<std::uint32_t>;

enum class MonomialOrder { grevlex, lex };

// order-compare: returns true when a < b in the given monomial order.
bool monomial_less(const Expo& a, const Expo& b, MonomialOrder ord);
unsigned total_degree(const Expo& e);
bool monomial_divides(const Expo& a, const Expo& b);   // a | b pointwise
Expo monomial_quotient(const Expo& b, const Expo& a);  // b / a
Expo monomial_lcm(const Expo& a, const Expo& b);

class MPoly {
public:
    MPoly() : nvars_(0) {}
    explicit MPoly(std::size_t nvars) : nvars_(nvars) {}
    MPoly(std::size_t nvars, const Rational& c);

    static MPoly variable(std::size_t nvars, std::size_t i);
    static MPoly monomial(const Expo& e, const Rational& c);

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    unsigned degree() const;  // total degree; 0 for the zero polynomial

    const std::map<Expo, Rational>& terms() const { return terms_; }

    void add_term(const Expo& e, const Rational& c);

    MPoly operator-() const;
    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o);
    friend MPoly operator+(MPoly a, const MPoly& b) { a += b; return a; }
    friend MPoly operator-(MPoly a, const MPoly& b) { a -= b; return a; }
    MPoly operator*(const MPoly& o) const;
    MPoly operator*(const Rational& c) const;
    friend bool operator==(const MPoly& a, const MPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    MPoly pow(unsigned e) const;

    // Leading term with respect to a monomial order.
    std::pair<Expo, Rational> leading_term(MonomialOrder ord) const;

    Rational eval(const std::vector<Rational>& point) const;

    // Substitute each variable by a polynomial (all with equal nvars).
    MPoly substitute(const std::vector<MPoly>& images) const;

    // Exact division: returns this / divisor, throws NotDivisible when the
    // remainder is nonzero.  Single-divisor reduction is exact for
    // membership in a principal ideal, so this is a genuine test.
    MPoly exact_divide(const MPoly& divisor) const;

    // Partial derivative with respect to variable i.
    MPoly derivative(std::size_t i) const;

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    std::size_t nvars_;
    std::map<Expo, Rational> terms_;
};

} // namespace defo::exactalg

namespace defo {
using exactalg::MonomialOrder;
using exactalg::MPoly;
}
