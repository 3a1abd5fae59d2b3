// Dense exact linear algebra over Q.
//
// Everything at desk scale (dimensions well under 10^3), so dense
// fraction-pivot Gauss-Jordan is the workhorse: no pivoting heuristics
// beyond "first nonzero", no fraction-free tricks.  All results are exact.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "defo/rational.hpp"

namespace defo::exactalg {

using Vec = std::vector<Rational>;

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool is_zero() const;
    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    Matrix transposed() const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const Rational& c) const;

    Vec apply(const Vec& v) const;       // matrix * column vector
    Matrix hcat(const Matrix& o) const;  // [this | o]
    Matrix vcat(const Matrix& o) const;  // [this ; o]

    // Kronecker product (this ⊗ o); used to extend maps along a tensor factor.
    Matrix kron(const Matrix& o) const;

    // Columns spanning the same space, selected from this matrix's columns.
    Matrix column_basis() const;

private:
    std::size_t rows_, cols_;
    std::vector<Rational> a_;
};

// Row-reduce m in place to reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(Matrix& m);

std::size_t rank(const Matrix& m);

// Basis of the null space {x : m x = 0}, one column per basis vector.
Matrix kernel_basis(const Matrix& m);

// A linear system A x = b carried around as a value; mirrors how systems
// are assembled incrementally by the callers (rows appended per condition).
struct LinSystem {
    Matrix a;
    Vec b;
};

// One solution of A x = b, if any.
std::optional<Vec> solve_linear(const Matrix& a, const Vec& b);
inline std::optional<Vec> solve_linear(const LinSystem& s) { return solve_linear(s.a, s.b); }

// Solve A X = B column-by-column; nullopt if any column is inconsistent.
std::optional<Matrix> solve_linear_many(const Matrix& a, const Matrix& b);

// Inverse of a square invertible matrix; nullopt if singular.
std::optional<Matrix> inverse(const Matrix& m);

// Is v in the column span of m?
bool in_column_span(const Matrix& m, const Vec& v);

// A factored system: row-reduce once, solve many right-hand sides cheaply.
class SolvedSystem {
public:
    explicit SolvedSystem(Matrix a);

    std::size_t unknowns() const { return cols_; }
    std::size_t rank() const { return pivots_.size(); }
    bool unique() const { return pivots_.size() == cols_; }

    // Solution of A x = b, nullopt when inconsistent.  When the system is
    // underdetermined the free variables are set to zero (deterministic).
    std::optional<Vec> solve(const Vec& b) const;

private:
    std::size_t rows_, cols_;
    Matrix red_;                        // rref of [A | I]
    std::vector<std::size_t> pivots_;
};

// Dimensions of the cohomology of a two-step pairing at one spot:
// given d_in : U -> V and d_out : V -> W with d_out ∘ d_in = 0,
// dim ker(d_out) - rank(d_in).
std::size_t cohomology_dim_at(const Matrix& d_out, const Matrix& d_in);

// Representatives for ker(d_out) modulo im(d_in): columns are vectors in V
// projecting to a basis of the quotient.
Matrix cohomology_representatives(const Matrix& d_out, const Matrix& d_in);

// Coordinates of v in the cohomology basis returned by
// cohomology_representatives (i.e. solve v = reps * c + d_in * y).
// nullopt when v is not in ker(d_out) + im(d_in)'s span as required.
std::optional<Vec> cohomology_coordinates(const Matrix& reps, const Matrix& d_in, const Vec& v);

} // namespace defo::exactalg

namespace defo {
using exactalg::LinSystem;
using exactalg::Matrix;
using exactalg::Vec;
}
