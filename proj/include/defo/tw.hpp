#pragma once

// Semicosimplicial differential graded Lie algebras and their two
// totalizations: the total complex (levelwise shifts with alternating-sum
// coface differential) and the polynomial-forms totalization, whose level-n
// piece is forms on the n-simplex valued in the level-n algebra, glued by
// face compatibility.  Provides the integration and extension maps between
// them, augmentations, the capped cohomology of both sides, and
// Maurer-Cartan normal forms on the [0,1] and [0,2] truncations via the
// order-by-order decomposition of gauge data.
//
// Elements of forms ⊗ algebra ⊗ m_A are represented without materializing
// the tensor product: a FormElem stores one polynomial form per flat basis
// slot, with the same slot convention as the graded module (index = basis
// index of the algebra times dim m_A plus basis index of m_A; plain
// rational coefficients are the r = 1 case).

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "defo/artin.hpp"
#include "defo/dgla.hpp"
#include "defo/errors.hpp"
#include "defo/forms.hpp"
#include "defo/graded.hpp"
#include "defo/matrix.hpp"

namespace defo::tw {

using artin::ArtinAlgebra;
using exactalg::Expo;
using exactalg::Matrix;
using exactalg::MPoly;
using exactalg::Rational;
using exactalg::Vec;
using forms::PolyForm;
using graded::GradedElement;
using graded::GradedMap;
using graded::GradedSpace;

// ------------------------------------------------------------------ FormElem

// An element of Omega_n ⊗ V for a graded space V: per V-degree, one
// polynomial form per basis slot.  V may itself be a tensored space; the
// nonlinear operations below take the Artinian factor explicitly.
class FormElem {
public:
    FormElem() : n_(0), cap_(0) {}
    FormElem(std::size_t simplex_dim, unsigned cap) : n_(simplex_dim), cap_(cap) {}

    std::size_t simplex_dim() const { return n_; }
    unsigned cap() const { return cap_; }

    const std::map<int, std::vector<PolyForm>>& components() const { return comps_; }
    // A copy sized to expected_dim (zero forms where absent).
    std::vector<PolyForm> component(int degree, std::size_t expected_dim) const;
    void set_component(int degree, std::vector<PolyForm> v);
    void add_to_slot(int degree, std::size_t expected_dim, std::size_t idx, const PolyForm& f);

    bool is_zero() const;
    std::vector<int> degrees() const;

    FormElem& operator+=(const FormElem& o);
    FormElem& operator-=(const FormElem& o);
    friend FormElem operator+(FormElem a, const FormElem& b) { a += b; return a; }
    friend FormElem operator-(FormElem a, const FormElem& b) { a -= b; return a; }
    FormElem operator-() const;
    FormElem scaled(const Rational& c) const;
    // Multiply every slot by a scalar polynomial form (typically a 0-form).
    FormElem form_scaled(const PolyForm& w) const;
    friend bool operator==(const FormElem& a, const FormElem& b);
    friend bool operator!=(const FormElem& a, const FormElem& b) { return !(a == b); }

private:
    std::size_t n_;
    unsigned cap_;
    std::map<int, std::vector<PolyForm>> comps_;
};

// Constant-forms embedding of a graded element and its partial inverses.
FormElem constant_form(std::size_t n, unsigned cap, const GradedElement& v);
// Value of an element on the 0-simplex.
GradedElement point_value(const FormElem& x);
// Evaluate the 0-form part at a point of the simplex; throws if any slot
// carries a dt-part.
GradedElement eval_scalar(const FormElem& x, const std::vector<Rational>& point);

// w ⊗ v: every slot of v scaled into the form w.
FormElem form_tensor(const PolyForm& w, const GradedElement& v);

// Linear structure maps.  r is the dimension of the Artinian factor carried
// inside the slots (1 for plain rational coefficients).
FormElem level_d(const dgla::Dgla& L, std::size_t r, const FormElem& x);
FormElem face_form(unsigned k, const FormElem& x);
FormElem apply_map_form(const GradedMap& f, std::size_t r, const FormElem& x);

// Endpoint values of an element on the interval: (value at tau=0, value at
// tau=1), i.e. the faces with index 1 and 0.
std::pair<GradedElement, GradedElement> path_endpoints(const FormElem& x);

// Nonlinear calculus on Omega_n ⊗ L ⊗ m_A.  Gauge parameters are total
// degree 0, Maurer-Cartan elements total degree 1 (form degree plus
// algebra degree); mixed form degrees within a total degree are handled
// termwise.
FormElem level_bracket(const dgla::Dgla& L, const ArtinAlgebra& A, const FormElem& x,
                       const FormElem& y);
FormElem level_mc_defect(const dgla::Dgla& L, const ArtinAlgebra& A, const FormElem& x);
FormElem level_gauge(const dgla::Dgla& L, const ArtinAlgebra& A, const FormElem& a,
                     const FormElem& x);
FormElem level_bch(const dgla::Dgla& L, const ArtinAlgebra& A, const FormElem& a,
                   const FormElem& b);

// Filtration tools along the adapted basis of m_A, applied slotwise.
unsigned form_valuation(const ArtinAlgebra& A, const FormElem& x);  // nilpotency index if 0
FormElem form_adapted_part(const ArtinAlgebra& A, const FormElem& x, unsigned k);

// Tensored linear combination of plain elements: rows of coeffs index the
// basis elements, columns the r Artinian directions; basis[b] contributes
// coeffs(b, a) to Artinian slot a.
FormElem combine_tensored(const std::vector<FormElem>& basis, const Matrix& coeffs,
                          std::size_t r);

// ------------------------------------------------------------------- ScDgla

class ScDgla {
public:
    // levels g_0..g_M; cofaces[i-1][k] is the k-th coface g_{i-1} -> g_i,
    // k = 0..i.  Every coface must be a morphism of differential graded Lie
    // algebras and the cosimplicial identities must hold (checked).
    ScDgla(std::vector<dgla::Dgla> levels, std::vector<std::vector<GradedMap>> cofaces);

    std::size_t top_level() const { return levels_.size() - 1; }
    const dgla::Dgla& level(std::size_t i) const;
    const GradedMap& coface(std::size_t k, std::size_t i) const;  // ∂_{k,i}

private:
    std::vector<dgla::Dgla> levels_;
    std::vector<std::vector<GradedMap>> cofaces_;
};

// f must commute with the differentials and with all basis brackets.
void check_dgla_morphism(const dgla::Dgla& src, const dgla::Dgla& dst, const GradedMap& f);

// Levels outside [m1, m2] replaced by zero algebras (cofaces into and out of
// them become zero maps).
ScDgla truncate(const ScDgla& g, std::size_t m1, std::size_t m2);

struct AugmentedScDgla {
    // aug: base -> level 0, a DGLA morphism with equal composites into
    // level 1 (checked).
    AugmentedScDgla(dgla::Dgla base_algebra, ScDgla rest_levels, GradedMap augmentation);
    dgla::Dgla base;
    ScDgla rest;
    GradedMap aug;
};

// --------------------------------------------------------------- TW elements

struct TWElement {
    std::vector<FormElem> levels;  // size M+1; level n lives on the n-simplex
};

TWElement tw_zero(const ScDgla& g, unsigned cap);
// Throws MathCheckError when some face of level n disagrees with the coface
// image of level n-1.
void check_faces(const ScDgla& g, std::size_t r, const TWElement& x);
bool faces_compatible(const ScDgla& g, std::size_t r, const TWElement& x);

TWElement tw_d(const ScDgla& g, std::size_t r, const TWElement& x);
TWElement tw_bracket(const ScDgla& g, const ArtinAlgebra& A, const TWElement& x,
                     const TWElement& y);
TWElement tw_mc_defect(const ScDgla& g, const ArtinAlgebra& A, const TWElement& x);
TWElement tw_gauge(const ScDgla& g, const ArtinAlgebra& A, const TWElement& a,
                   const TWElement& x);
bool tw_is_mc(const ScDgla& g, const ArtinAlgebra& A, const TWElement& x);

TWElement operator+(const TWElement& a, const TWElement& b);
TWElement operator-(const TWElement& a, const TWElement& b);
bool operator==(const TWElement& a, const TWElement& b);

// -------------------------------------------------------------- Tot elements

struct TotElement {
    int total_degree = 0;
    std::vector<GradedElement> levels;  // level i is homogeneous of degree total-i
};

TotElement tot_zero(const ScDgla& g, int total_degree);
// Alternating sum of cofaces plus the levelwise differential signed by the
// level.
TotElement tot_differential(const ScDgla& g, const TotElement& x);
TotElement tot_add(const TotElement& a, const TotElement& b);
bool tot_equal(const TotElement& a, const TotElement& b);

// Levelwise integration of the top-form part (plain coefficients).
TotElement integration_map(const ScDgla& g, const TWElement& x, int total_degree);

// Extension by elementary forms: the level-m component collects, over
// order-preserving injections of {0..n} into {0..m}, the elementary form of
// the image tensored with the corresponding coface composite.  Right
// inverse of integration_map (tested).
TWElement whitney_map(const ScDgla& g, unsigned cap, const TotElement& y);

// Constant tuple through iterated last cofaces of the augmentation.
TWElement augment_embed(const AugmentedScDgla& ag, unsigned cap, std::size_t r,
                        const GradedElement& x);

// ------------------------------------------------- linear coordinates & cohomology

// Basis-indexed coordinates for the total-degree-j piece of degree-capped
// forms on the n-simplex valued in V: slots are (V-degree, V-index,
// dt-mask, monomial exponent) with popcount(mask) + V-degree = j and
// monomial degree within the cap.
class LevelCoords {
public:
    LevelCoords(std::size_t n, unsigned cap, GradedSpace V, int total_degree);

    std::size_t dim() const { return slots_.size(); }
    std::size_t simplex_dim() const { return n_; }
    int total_degree() const { return degree_; }

    Vec encode(const FormElem& x) const;  // plain (r = 1); throws on out-of-range terms
    Matrix encode_slots(const FormElem& x, std::size_t r) const;  // one column per slot of m_A
    FormElem decode(const Vec& v) const;

private:
    struct Slot {
        int g_deg;
        std::size_t g_idx;
        std::uint32_t mask;
        Expo expo;
    };
    std::size_t n_;
    unsigned cap_;
    GradedSpace space_;
    int degree_;
    std::vector<Slot> slots_;
    std::map<std::tuple<int, std::size_t, std::uint32_t, Expo>, std::size_t> lookup_;
};

// Cohomology dimensions of the total complex, all degrees.
std::map<int, std::size_t> tot_cohomology_dims(const ScDgla& g);

// Cohomology dimensions of the face-compatible capped forms complex for
// total degrees in [jmin, jmax].  The cap bounds polynomial degrees
// throughout; results are exact for the capped subcomplex (which may differ
// from the uncapped one — callers pick caps with enough headroom).
std::map<int, std::size_t> tw_cohomology_dims(const ScDgla& g, unsigned cap, int jmin,
                                              int jmax);

// The three comparison statements for the projection of the total complex
// onto its [0,2] truncation: surjective on H^0, bijective on H^1, injective
// on H^2.
struct TruncationComparison {
    bool h0_surjective = false;
    bool h1_bijective = false;
    bool h2_injective = false;
};
TruncationComparison truncation_criterion(const ScDgla& g);

// ------------------------------------------------------- MC decompositions

// A three-part direct-sum splitting of a finite algebra, columns per degree;
// the differential must map the middle part isomorphically onto the third
// with a degree shift of one.
struct Splitting {
    std::map<int, Matrix> sub_m, sub_c, sub_d;
};
void validate_splitting(const dgla::Dgla& L, const Splitting& S);

struct Decomposition {
    GradedElement x;  // Maurer-Cartan element inside the first summand
    GradedElement c;  // degree-0 gauge datum inside the middle summand
};
// The unique (x, c) with gauge(c, x) = y, found order-by-order along the
// adapted filtration of m_A; every step is an exact linear solve and the
// result is verified exactly.
Decomposition decompose_mc(const dgla::Dgla& L, const ArtinAlgebra& A, const Splitting& S,
                           const GradedElement& y);

// Normal form of a Maurer-Cartan tuple on levels 0..1: a Maurer-Cartan
// element of g_0 ⊗ m_A plus an interval 0-form gauge path through the
// zeroth coface image, vanishing at tau = 1.  Only levels 0 and 1 of g and
// y are consulted.
struct NormalForm01 {
    GradedElement x;
    FormElem p;
};
NormalForm01 normal_form_01(const ScDgla& g, const ArtinAlgebra& A, const TWElement& y,
                            unsigned cap);
// Rebuild the tuple (levels 0..1) from normal-form data.
TWElement assemble_01(const ScDgla& g, const ArtinAlgebra& A, const GradedElement& x,
                      const FormElem& p, unsigned cap);

// Normal form on levels 0..2: additionally a triangle 0-form gauge datum
// vanishing at the last vertex and a (1-t1-t2)dt1-shaped datum in degree -1,
// gauging the constant double-coface image into the level-2 component.
struct NormalForm02 {
    GradedElement x;
    FormElem p;   // interval datum as in NormalForm01
    FormElem q;   // triangle 0-form, algebra degree 0
    FormElem rr;  // triangle 1-form part, algebra degree -1
};
NormalForm02 normal_form_02(const ScDgla& g, const ArtinAlgebra& A, const TWElement& y,
                            unsigned cap);
TWElement assemble_02(const ScDgla& g, const ArtinAlgebra& A, const NormalForm02& nf,
                      unsigned cap);

} // namespace defo::tw
