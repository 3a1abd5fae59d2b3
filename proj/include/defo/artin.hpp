#pragma once

// Local Artinian Q-algebras presented by a basis of the maximal ideal and a
// product table.  The unit component is implicit: A = Q*1 (+) m_A, and all
// arithmetic here happens inside m_A, whose elements are coefficient vectors
// over the stored basis.

#include <cstddef>
#include <string>
#include <vector>

#include "defo/errors.hpp"
#include "defo/matrix.hpp"

namespace defo::artin {

using exactalg::Matrix;
using exactalg::Rational;
using exactalg::Vec;

class ArtinAlgebra {
public:
    // products[i][j] = coefficients of e_i * e_j over the ideal basis; the
    // table must be commutative, associative, and nilpotent.  Construction
    // checks all of that eagerly and computes the nilpotency index N (the
    // smallest N with m^N = 0) together with a filtration-adapted basis:
    // coordinates grouped by the largest power of m containing them.
    ArtinAlgebra(std::vector<std::string> basis_names,
                 std::vector<std::vector<Vec>> products);

    std::size_t dim() const { return names_.size(); }
    const std::vector<std::string>& basis_names() const { return names_; }
    unsigned nilpotency_index() const { return nilpotency_; }
    const Vec& product_entry(std::size_t i, std::size_t j) const { return products_[i][j]; }

    Vec zero() const { return Vec(dim(), Rational(0)); }
    Vec basis_element(std::size_t i) const;
    Vec multiply(const Vec& u, const Vec& v) const;

    // Columns spanning m^k (k from 1 to N; m^N has zero columns).
    const Matrix& power_span(unsigned k) const;

    // Adapted coordinates: an invertible change of basis of m_A whose j-th
    // vector lies in m^{level(j)} and projects to a basis of
    // m^{level(j)} / m^{level(j)+1}.  Levels are non-decreasing in j.
    unsigned adapted_level(std::size_t j) const { return adapted_levels_[j]; }
    const Matrix& adapted_basis() const { return adapted_; }          // columns
    const Matrix& adapted_inverse() const { return adapted_inv_; }    // coords map
    Vec to_adapted(const Vec& v) const;
    Vec from_adapted(const Vec& v) const;

    // Largest k with v in m^k (v = 0 gives N, the "infinite" valuation).
    unsigned valuation(const Vec& v) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<Vec>> products_;
    unsigned nilpotency_ = 0;
    std::vector<Matrix> power_spans_;  // index k-1 holds m^k
    Matrix adapted_, adapted_inv_;
    std::vector<unsigned> adapted_levels_;
};

// Q[eps]/(eps^n) for n >= 2: basis eps, eps^2, ..., eps^{n-1}.
ArtinAlgebra make_dual_numbers(unsigned n);

// A surjection of Artinian algebras whose kernel J is killed by the maximal
// ideal of the source: J * m_B = 0.  Construction verifies surjectivity, the
// morphism property, the kernel description, and the annihilation condition.
class SmallExtension {
public:
    SmallExtension(ArtinAlgebra total, ArtinAlgebra base, Matrix projection,
                   std::vector<Vec> kernel_basis);

    const ArtinAlgebra& total() const { return total_; }
    const ArtinAlgebra& base() const { return base_; }
    const Matrix& projection() const { return projection_; }  // dim_A x dim_B
    const std::vector<Vec>& kernel_basis() const { return kernel_; }

    // A fixed linear right inverse of the projection (dim_B x dim_A), used to
    // lift base elements; projection * section = identity.
    const Matrix& section() const { return section_; }

    Vec project(const Vec& v) const;  // m_B -> m_A
    Vec lift(const Vec& v) const;     // m_A -> m_B via the section

    // Coordinates of a kernel element over kernel_basis; empty optional when
    // the element is not in J.
    std::optional<Vec> kernel_coordinates(const Vec& v) const;

private:
    ArtinAlgebra total_, base_;
    Matrix projection_, section_, kernel_matrix_;
    std::vector<Vec> kernel_;
};

// The factorization of Q[eps]/(eps^n) -> Q[eps]/(eps^2) into one-dimensional
// small extensions Q[eps]/(eps^{k+1}) -> Q[eps]/(eps^k), k = n-1, ..., 2.
std::vector<SmallExtension> small_extension_chain(unsigned n);

} // namespace defo::artin
