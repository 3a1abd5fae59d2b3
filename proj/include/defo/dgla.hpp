#pragma once

// Differential graded Lie algebras with exact rational structure constants,
// and the gauge calculus on elements tensored with the maximal ideal of an
// Artinian algebra: Maurer-Cartan defect, gauge action, the BCH product,
// irrelevant stabilizers, twisted differentials, obstruction classes, and a
// gauge-equivalence decision procedure.
//
// All series here (gauge, BCH) terminate exactly: arguments live in L (x) m_A
// and every nested bracket multiplies the m_A-degree, so nilpotency cuts the
// series off.  The calculus is generic over the coefficient type K so the
// same formulas run on honest rational elements (K = Rational) and on
// elements with unknown symbolic coordinates (K = MPoly), which is how the
// equivalence decision reduces to polynomial solvability.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "defo/artin.hpp"
#include "defo/errors.hpp"
#include "defo/graded.hpp"
#include "defo/groebner.hpp"

namespace defo::dgla {

using artin::ArtinAlgebra;
using artin::SmallExtension;
using exactalg::Matrix;
using exactalg::MPoly;
using exactalg::Rational;
using exactalg::Vec;
using graded::GElemT;
using graded::GradedElement;
using graded::GradedMap;
using graded::GradedSpace;

struct BracketEntry {
    int deg_a;
    std::size_t idx_a;
    int deg_b;
    std::size_t idx_b;
    std::size_t idx_out;  // in degree deg_a + deg_b
    Rational coeff;
};

// How much of the axiom surface to verify at construction.  Hand-authored
// inputs get the full basis-triple sweep; machine-derived structures that are
// correct by construction can use a seeded random sample or skip.
enum class CheckLevel { full, sampled, none };

class Dgla {
public:
    Dgla(GradedSpace space, GradedMap d, std::vector<BracketEntry> bracket,
         CheckLevel level = CheckLevel::full, std::uint64_t seed = 1);

    const GradedSpace& space() const { return space_; }
    const GradedMap& d() const { return d_; }

    // [e_{da,ia}, e_{db,ib}] as a dense coefficient vector in degree da+db.
    Vec bracket_basis(int da, std::size_t ia, int db, std::size_t ib) const;

    struct Entry {
        std::size_t idx_a, idx_b, idx_out;
        Rational coeff;
    };
    // All bracket entries for the degree pair (da, db).
    const std::vector<Entry>& entries(int da, int db) const;

    // Bracket of plain elements of L (coefficients in K, no Artin tensor).
    template <typename K>
    GElemT<K> bracket(const GElemT<K>& x, const GElemT<K>& y) const {
        GElemT<K> out;
        for (const auto& [da, xa] : x.components())
            for (const auto& [db, yb] : y.components()) {
                const auto& list = entries(da, db);
                if (list.empty()) continue;
                std::vector<K> comp = out.component(da + db, space_.dim(da + db));
                for (const auto& e : list) {
                    if (xa[e.idx_a].is_zero() || yb[e.idx_b].is_zero()) continue;
                    comp[e.idx_out] += xa[e.idx_a] * yb[e.idx_b] * e.coeff;
                }
                out.set_component(da + db, std::move(comp));
            }
        return out;
    }

private:
    GradedSpace space_;
    GradedMap d_;
    std::map<std::pair<int, int>, std::vector<Entry>> table_;

    void check_axioms(CheckLevel level, std::uint64_t seed) const;
};

// ---------------------------------------------------------------------------
// Calculus on L (x) m_A.  Elements are GElemT<K> over the tensored space,
// flat index (v, e) = v * r + e with r = dim m_A.

namespace detail {

template <typename K>
void require_homogeneous(const GElemT<K>& x, int degree, const char* what) {
    for (const auto& [deg, comp] : x.components())
        if (deg != degree)
            for (const auto& c : comp)
                if (!c.is_zero())
                    throw InputError(std::string(what) + ": element must be homogeneous of degree " +
                                     std::to_string(degree));
}

} // namespace detail

// (d (x) 1) x.
template <typename K>
GElemT<K> differential(const Dgla& L, const ArtinAlgebra& A, const GElemT<K>& x) {
    const std::size_t r = A.dim();
    GElemT<K> out;
    for (const auto& [deg, comp] : x.components()) {
        const std::size_t n_in = L.space().dim(deg);
        const std::size_t n_out = L.space().dim(deg + 1);
        if (comp.size() != n_in * r) throw InputError("differential: component size mismatch");
        if (n_out == 0) continue;
        Matrix block = L.d().block(deg);
        std::vector<K> o(n_out * r);
        for (std::size_t i = 0; i < n_out; ++i)
            for (std::size_t j = 0; j < n_in; ++j) {
                if (block.at(i, j).is_zero()) continue;
                for (std::size_t e = 0; e < r; ++e) o[i * r + e] += comp[j * r + e] * block.at(i, j);
            }
        out.set_component(deg + 1, std::move(o));
    }
    return out;
}

// [x, y] in L (x) m_A: structure constants on the L side, the ideal product
// on the m_A side.
template <typename K>
GElemT<K> bracket(const Dgla& L, const ArtinAlgebra& A, const GElemT<K>& x, const GElemT<K>& y) {
    const std::size_t r = A.dim();
    GElemT<K> out;
    for (const auto& [da, xa] : x.components())
        for (const auto& [db, yb] : y.components()) {
            const auto& list = L.entries(da, db);
            if (list.empty()) continue;
            const std::size_t n_out = L.space().dim(da + db);
            std::vector<K> comp = out.component(da + db, n_out * r);
            for (const auto& e : list)
                for (std::size_t ea = 0; ea < r; ++ea) {
                    const K& ca = xa[e.idx_a * r + ea];
                    if (ca.is_zero()) continue;
                    for (std::size_t eb = 0; eb < r; ++eb) {
                        const K& cb = yb[e.idx_b * r + eb];
                        if (cb.is_zero()) continue;
                        const Vec& prod = A.product_entry(ea, eb);
                        for (std::size_t t = 0; t < r; ++t) {
                            if (prod[t].is_zero()) continue;
                            comp[e.idx_out * r + t] += ca * cb * (e.coeff * prod[t]);
                        }
                    }
                }
            out.set_component(da + db, std::move(comp));
        }
    return out;
}

// dx + (1/2)[x, x] for homogeneous degree-1 x; zero exactly when x satisfies
// the deformation equation.
template <typename K>
GElemT<K> mc_defect(const Dgla& L, const ArtinAlgebra& A, const GElemT<K>& x) {
    detail::require_homogeneous(x, 1, "mc_defect");
    GElemT<K> out = differential(L, A, x);
    out += bracket(L, A, x, x).scaled_by(Rational(1, 2));
    return out;
}

bool is_mc(const Dgla& L, const ArtinAlgebra& A, const GradedElement& x);

// e^a * x = x + sum_{n>=0} ad_a^n / (n+1)! ([a,x] - da); terminates by
// nilpotency of m_A.
template <typename K>
GElemT<K> gauge(const Dgla& L, const ArtinAlgebra& A, const GElemT<K>& a, const GElemT<K>& x) {
    detail::require_homogeneous(a, 0, "gauge");
    detail::require_homogeneous(x, 1, "gauge");
    GElemT<K> cur = bracket(L, A, a, x) - differential(L, A, a);
    GElemT<K> out = x;
    unsigned n = 0;
    while (!cur.is_zero()) {
        out += cur.scaled_by(Rational(1) / Rational::factorial(n + 1));
        cur = bracket(L, A, a, cur);
        ++n;
        if (n > A.nilpotency_index() + 2)
            throw MathCheckError("gauge: series failed to terminate (nilpotency violated)");
    }
    return out;
}

// Baker-Campbell-Hausdorff product a . b = log(e^a e^b) on degree-0 elements,
// computed by the explicit commutator-word expansion, truncated at total
// word weight N-1 (N = nilpotency index).
template <typename K>
GElemT<K> bch(const Dgla& L, const ArtinAlgebra& A, const GElemT<K>& a, const GElemT<K>& b) {
    detail::require_homogeneous(a, 0, "bch");
    detail::require_homogeneous(b, 0, "bch");
    GElemT<K> out;
    const unsigned maxw = A.nilpotency_index() >= 2 ? A.nilpotency_index() - 1 : 1;

    // Blocks (p_i, q_i), p_i + q_i >= 1; for each sequence the summand is the
    // right-nested bracket of the word a^{p_1} b^{q_1} ... a^{p_n} b^{q_n}
    // divided by w * n-sign * product of factorials.
    struct Rec {
        const Dgla& L;
        const ArtinAlgebra& A;
        const GElemT<K>&a, &b;
        GElemT<K>& out;
        std::vector<std::pair<unsigned, unsigned>> blocks;

        void word_bracket_and_add(unsigned w) {
            // Letters of the word, in order.
            std::vector<const GElemT<K>*> letters;
            for (const auto& [p, q] : blocks) {
                for (unsigned i = 0; i < p; ++i) letters.push_back(&a);
                for (unsigned i = 0; i < q; ++i) letters.push_back(&b);
            }
            GElemT<K> cur = *letters.back();
            for (std::size_t i = letters.size() - 1; i-- > 0;) {
                cur = bracket(L, A, *letters[i], cur);
                if (cur.is_zero()) return;
            }
            Rational denom = Rational(static_cast<long>(blocks.size())) * Rational(static_cast<long>(w));
            for (const auto& [p, q] : blocks) denom *= Rational::factorial(p) * Rational::factorial(q);
            Rational coeff = Rational(1) / denom;
            if (blocks.size() % 2 == 0) coeff = -coeff;
            out += cur.scaled_by(coeff);
        }

        void extend(unsigned remaining, unsigned w) {
            if (remaining == 0) {
                word_bracket_and_add(w);
                return;
            }
            for (unsigned t = 1; t <= remaining; ++t)
                for (unsigned p = 0; p <= t; ++p) {
                    blocks.emplace_back(p, t - p);
                    extend(remaining - t, w);
                    blocks.pop_back();
                }
        }
    };

    for (unsigned w = 1; w <= maxw; ++w) {
        Rec rec{L, A, a, b, out, {}};
        rec.extend(w, w);
    }
    return out;
}

// Consistency of the product with the action: e^{a.b} * x = e^a * (e^b * x).
bool gauge_group_law_check(const Dgla& L, const ArtinAlgebra& A, const GradedElement& a,
                           const GradedElement& b, const GradedElement& x);

// The differential d_x = d + [x, -] on L (x) m_A, materialized degreewise.
// Requires no property of x by itself; squares to zero exactly when x is MC.
GradedMap twisted_differential_map(const Dgla& L, const ArtinAlgebra& A, const GradedElement& x);

struct TwistedDgla {
    Dgla base;            // the untwisted structure (bracket is unchanged)
    ArtinAlgebra ring;
    GradedElement twist;  // the MC element
    GradedMap dx;         // d + [twist, -] on the tensored space
};

// Twist by an MC element; verifies the MC equation and dx^2 = 0.
TwistedDgla twisted(const Dgla& L, const ArtinAlgebra& A, const GradedElement& x);

// Solve dh + [x, h] = u for h of degree -1; x must be MC, u of degree 0.
std::optional<GradedElement> irrelevant_stabilizer_membership(const Dgla& L,
                                                              const ArtinAlgebra& A,
                                                              const GradedElement& x,
                                                              const GradedElement& u);

struct ObstructionResult {
    // Rows: basis of H^2(L); columns: kernel basis of the extension.  The
    // class of the lifted defect; independent of the chosen lift.
    Matrix class_in_h2;
    bool lifts = false;
    std::optional<GradedElement> lift;  // MC over the total ring when lifts
};

// Obstruction of an MC element over the base of a small extension against
// lifting to the total ring.  An optional kernel-valued degree-1 perturbation
// changes the chosen set-theoretic lift (the class must not change).
ObstructionResult obstruction_class(const Dgla& L, const SmallExtension& ext,
                                    const GradedElement& x,
                                    const std::optional<GradedElement>& lift_perturbation = {});

struct GaugeEquivResult {
    bool equivalent = false;
    // Present when the solution variety is zero-dimensional and a rational
    // point exists; always satisfies gauge(witness, x0) = x1.
    std::optional<GradedElement> witness;
};

// Decide whether two MC elements are gauge equivalent over the algebraic
// closure, by polynomial solvability of e^a * x0 = x1 in the coordinates of
// the unknown a.
GaugeEquivResult gauge_equiv_decide(const Dgla& L, const ArtinAlgebra& A,
                                    const GradedElement& x0, const GradedElement& x1,
                                    const exactalg::GroebnerOptions& opt = {});

// dim H^1(L) with cocycle representatives.
graded::Cohomology tangent_space(const Dgla& L);

} // namespace defo::dgla
