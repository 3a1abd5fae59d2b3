#pragma once

// Deterministic generators for test and demonstration instances: seeded
// random rationals, complexes with prescribed cohomology, differential
// graded Lie algebras assembled from endomorphism algebras of complexes,
// and random Maurer-Cartan data produced by pure gauges.
//
// Everything here is reproducible from the seed alone; no global state.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "defo/artin.hpp"
#include "defo/dgla.hpp"
#include "defo/graded.hpp"

namespace defo::gen {

using artin::ArtinAlgebra;
using exactalg::Matrix;
using exactalg::Rational;
using exactalg::Vec;
using graded::GradedElement;
using graded::GradedMap;
using graded::GradedSpace;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }
    // Uniform-enough index in [0, n); n >= 1.
    std::size_t index(std::size_t n);
    // Integer in [lo, hi], inclusive.
    long integer(long lo, long hi);
    // Rational with numerator in [-max_num, max_num] and denominator in
    // [1, max_den].
    Rational rational(long max_num, long max_den);
    // Nonzero variant of the above.
    Rational nonzero_rational(long max_num, long max_den);

private:
    std::mt19937_64 eng_;
};

// Zero differential, zero bracket.
dgla::Dgla abelian_dgla(const GradedSpace& space);

// Graded endomorphisms of the complex (V, dV): degree p collects the maps
// V^q -> V^{q+p}, the differential is the graded commutator with dV, and the
// bracket is the graded commutator of compositions.  Basis order within
// degree p: source degrees ascending, then (target index, source index)
// row-major.
dgla::Dgla end_dgla(const GradedSpace& V, const GradedMap& dV,
                    dgla::CheckLevel check = dgla::CheckLevel::full);

// Block direct sum: first summand's basis precedes the second's in every
// degree; brackets and differentials act blockwise.
dgla::Dgla direct_sum(const dgla::Dgla& a, const dgla::Dgla& b,
                      dgla::CheckLevel check = dgla::CheckLevel::full);

// Transport of structure through a random invertible change of basis in
// every degree.
dgla::Dgla random_conjugate(const dgla::Dgla& L, Rng& rng,
                            dgla::CheckLevel check = dgla::CheckLevel::full);

// A complex whose cohomology has dimension h_q in degree q: h_q free
// generators plus acyclic two-term pieces, mixed by a random change of
// basis.  Returns the space and its differential.
std::pair<GradedSpace, GradedMap> random_complex(Rng& rng, int deg_min, int deg_max,
                                                 const std::vector<std::size_t>& h_dims,
                                                 const std::vector<std::size_t>& acyclic_pairs);

// A nontrivial random differential graded Lie algebra at desk scale:
// endomorphisms of a small random complex, optionally summed with a random
// abelian part, in a random basis.  Axioms are verified at the requested
// level during construction.
dgla::Dgla random_dgla(Rng& rng, dgla::CheckLevel check = dgla::CheckLevel::full);

// Random element of m_A.
Vec random_m_vec(const ArtinAlgebra& A, Rng& rng);

// Random homogeneous element of V^degree tensor m_A.
GradedElement random_tensored(const GradedSpace& V, int degree, const ArtinAlgebra& A,
                              Rng& rng);

// Random Maurer-Cartan element of L tensor m_A: the gauge of zero by a
// random degree-0 element (verified).
GradedElement random_mc(const dgla::Dgla& L, const ArtinAlgebra& A, Rng& rng);

} // namespace defo::gen
