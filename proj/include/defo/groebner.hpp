// Groebner bases over Q (Buchberger with the coprime-lcm and chain
// criteria, full inter-reduction, monic normalization) and the two
// consumers the library needs: radical-membership of 1 (solvability over
// the algebraic closure) and rational-point extraction for
// zero-dimensional ideals.
#pragma once

#include <optional>
#include <vector>

#include "defo/mpoly.hpp"

namespace defo::exactalg {

struct GroebnerOptions {
    MonomialOrder order = MonomialOrder::grevlex;
    // Number of S-pair reductions attempted before giving up.
    std::size_t spair_budget = 20000;
};

struct PolyIdeal {
    std::size_t nvars = 0;
    std::vector<MPoly> gens;
};

// Reduced Groebner basis.  Throws ResourceError when the S-pair budget is
// exhausted.  The result is sorted by leading monomial (ascending), each
// element monic: a canonical form, so equal ideals give equal bases.
std::vector<MPoly> groebner(const PolyIdeal& ideal, const GroebnerOptions& opt = {});

// Remainder of f on division by the (Groebner) basis g.
MPoly normal_form(const MPoly& f, const std::vector<MPoly>& g, MonomialOrder ord);

// Does the system {g = 0 : g in gens} admit a solution over the algebraic
// closure of Q?  (Nullstellensatz: yes iff 1 is not in the ideal.)
bool ideal_has_solution(const PolyIdeal& ideal, const GroebnerOptions& opt = {});

// A zero-dimensional ideal has, for every variable, a basis element whose
// leading monomial is a pure power of that variable.
bool is_zero_dimensional(const std::vector<MPoly>& basis, std::size_t nvars, MonomialOrder ord);

// Attempt to find a rational common zero of a zero-dimensional system.
// Computes a lex basis internally and back-substitutes through rational
// roots only; returns nullopt when the search leaves Q (which does not
// mean the system is unsolvable over the closure).
std::optional<std::vector<Rational>> rational_point(const PolyIdeal& ideal,
                                                    const GroebnerOptions& opt = {});

// All rational roots of a univariate polynomial given as coefficient list
// (index = power).  Exact, via the rational root theorem.
std::vector<Rational> rational_roots_univariate(const std::vector<Rational>& coeffs);

} // namespace defo::exactalg

namespace defo {
using exactalg::GroebnerOptions;
using exactalg::PolyIdeal;
}
