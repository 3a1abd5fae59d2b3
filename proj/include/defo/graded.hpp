#pragma once

// Finite-dimensional integer-graded vector spaces over Q, degree-homogeneous
// linear maps between them, cochain-complex cohomology, and the tensor of a
// graded space with the maximal ideal of an Artinian algebra.
//
// Tensored spaces are plain graded spaces again: degree j of V (x) m_A has
// dimension dim V^j * r, with the flat index convention
//     index(v, a) = v * r + a
// for v a basis index of V^j and a a basis index of m_A.  All module
// structure over A is applied through that convention.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "defo/artin.hpp"
#include "defo/errors.hpp"
#include "defo/matrix.hpp"
#include "defo/mpoly.hpp"

namespace defo::graded {

using exactalg::Matrix;
using exactalg::Rational;
using exactalg::Vec;

class GradedSpace {
public:
    GradedSpace() = default;
    explicit GradedSpace(std::map<int, std::size_t> dims,
                         std::map<int, std::vector<std::string>> names = {});
    GradedSpace(std::initializer_list<std::pair<const int, std::size_t>> dims)
        : GradedSpace(std::map<int, std::size_t>(dims)) {}

    std::size_t dim(int degree) const;
    const std::map<int, std::size_t>& dims() const { return dims_; }
    std::vector<int> degrees() const;
    std::size_t total_dim() const;
    bool is_zero() const { return dims_.empty(); }
    std::string basis_name(int degree, std::size_t i) const;

    friend bool operator==(const GradedSpace& a, const GradedSpace& b) {
        return a.dims_ == b.dims_;
    }
    friend bool operator!=(const GradedSpace& a, const GradedSpace& b) { return !(a == b); }

private:
    std::map<int, std::size_t> dims_;
    std::map<int, std::vector<std::string>> names_;
};

// Elements with coefficients in K (Rational for honest elements, MPoly for
// elements whose coordinates are symbolic).  Sparse over degrees; a missing
// degree is zero.
template <typename K>
class GElemT {
public:
    GElemT() = default;

    bool is_zero() const {
        for (const auto& [deg, comp] : comps_)
            for (const auto& c : comp)
                if (!c.is_zero()) return false;
        return true;
    }

    const std::vector<K>& component(int degree, std::size_t expected_dim) const {
        static const std::vector<K> empty;
        auto it = comps_.find(degree);
        if (it == comps_.end()) {
            zero_buffer_ = std::vector<K>(expected_dim);
            return zero_buffer_;
        }
        if (it->second.size() != expected_dim)
            throw InputError("graded element component has wrong dimension");
        return it->second;
    }

    void set_component(int degree, std::vector<K> v) {
        bool all_zero = true;
        for (const auto& c : v)
            if (!c.is_zero()) { all_zero = false; break; }
        if (all_zero)
            comps_.erase(degree);
        else
            comps_[degree] = std::move(v);
    }

    const std::map<int, std::vector<K>>& components() const { return comps_; }

    std::vector<int> degrees() const {
        std::vector<int> out;
        for (const auto& [deg, comp] : comps_) out.push_back(deg);
        return out;
    }

    // Nonzero in exactly one degree.
    std::optional<int> homogeneous_degree() const {
        std::optional<int> deg;
        for (const auto& [d, comp] : comps_) {
            bool nz = false;
            for (const auto& c : comp)
                if (!c.is_zero()) { nz = true; break; }
            if (!nz) continue;
            if (deg) return std::nullopt;
            deg = d;
        }
        return deg;
    }

    GElemT& operator+=(const GElemT& o) {
        for (const auto& [deg, comp] : o.comps_) {
            auto it = comps_.find(deg);
            if (it == comps_.end()) {
                comps_[deg] = comp;
                continue;
            }
            if (it->second.size() != comp.size())
                throw InputError("graded element addition: dimension mismatch");
            for (std::size_t i = 0; i < comp.size(); ++i) it->second[i] += comp[i];
        }
        prune();
        return *this;
    }
    GElemT& operator-=(const GElemT& o) {
        GElemT neg = o;
        for (auto& [deg, comp] : neg.comps_)
            for (auto& c : comp) c = -c;
        return (*this += neg);
    }
    friend GElemT operator+(GElemT a, const GElemT& b) { a += b; return a; }
    friend GElemT operator-(GElemT a, const GElemT& b) { a -= b; return a; }

    GElemT scaled(const K& c) const {
        GElemT out = *this;
        for (auto& [deg, comp] : out.comps_)
            for (auto& x : comp) x = x * c;
        out.prune();
        return out;
    }

    // Scale by a rational number (works for both rational and polynomial
    // coefficients, which both multiply by Rational).
    GElemT scaled_by(const Rational& c) const {
        GElemT out = *this;
        for (auto& [deg, comp] : out.comps_)
            for (auto& x : comp) x = x * c;
        out.prune();
        return out;
    }

    friend bool operator==(const GElemT& a, const GElemT& b) {
        return (a - b).is_zero();
    }
    friend bool operator!=(const GElemT& a, const GElemT& b) { return !(a == b); }

private:
    void prune() {
        for (auto it = comps_.begin(); it != comps_.end();) {
            bool all_zero = true;
            for (const auto& c : it->second)
                if (!c.is_zero()) { all_zero = false; break; }
            it = all_zero ? comps_.erase(it) : std::next(it);
        }
    }

    std::map<int, std::vector<K>> comps_;
    mutable std::vector<K> zero_buffer_;
};

using GradedElement = GElemT<Rational>;

// Apply a rational matrix to a vector with entries in K.
template <typename K>
std::vector<K> apply_block(const Matrix& m, const std::vector<K>& v) {
    if (v.size() != m.cols()) throw InputError("apply_block: dimension mismatch");
    std::vector<K> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            out[i] += v[j] * m.at(i, j);
        }
    return out;
}

class GradedMap {
public:
    // blocks[j]: source degree j -> target degree j + shift; missing blocks
    // are zero.  Shapes are validated; zero blocks are dropped.
    GradedMap(GradedSpace source, GradedSpace target, int shift,
              std::map<int, Matrix> blocks);

    static GradedMap zero(GradedSpace source, GradedSpace target, int shift);
    static GradedMap identity(const GradedSpace& space);

    const GradedSpace& source() const { return source_; }
    const GradedSpace& target() const { return target_; }
    int shift() const { return shift_; }

    Matrix block(int degree) const;  // materialized (zero when absent)
    const std::map<int, Matrix>& stored_blocks() const { return blocks_; }
    bool is_zero() const { return blocks_.empty(); }

    GradedMap compose(const GradedMap& inner) const;  // *this after inner
    GradedMap operator+(const GradedMap& o) const;
    GradedMap operator-(const GradedMap& o) const;
    GradedMap scaled(const Rational& c) const;
    friend bool operator==(const GradedMap& a, const GradedMap& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ &&
               a.shift_ == b.shift_ && a.blocks_ == b.blocks_;
    }

    template <typename K>
    GElemT<K> apply(const GElemT<K>& v) const {
        GElemT<K> out;
        for (const auto& [deg, comp] : v.components()) {
            if (source_.dim(deg) == 0) {
                bool nz = false;
                for (const auto& c : comp)
                    if (!c.is_zero()) nz = true;
                if (nz) throw InputError("GradedMap::apply: element outside source");
                continue;
            }
            out.set_component(deg + shift_, apply_block<K>(block(deg), comp));
        }
        return out;
    }

private:
    GradedSpace source_, target_;
    int shift_ = 0;
    std::map<int, Matrix> blocks_;
};

struct Cohomology {
    std::size_t dim = 0;
    Matrix representatives;  // columns are cocycles spanning the cohomology
};

// Per-degree cohomology of (space, d) where d has shift 1 and d^2 = 0
// (checked; throws NotADifferential otherwise).  Degrees of dimension zero
// are omitted from the result.
std::map<int, Cohomology> complex_cohomology(const GradedSpace& space, const GradedMap& d);

// Tensor with the maximal ideal of A: dimensions multiply by dim m_A and
// basis names become "v(x)e" pairs, using the index convention above.
GradedSpace tensor_artin(const GradedSpace& space, const artin::ArtinAlgebra& a);

// The same tensor on maps: each block becomes block (x) identity.
GradedMap tensor_map_artin(const GradedMap& map, const artin::ArtinAlgebra& a);

} // namespace defo::graded
