#include "defo/matrix.hpp"

#include <cstddef>

namespace defo::exactalg {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw InputError("matrix product shape mismatch");
    Matrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& x = at(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                if (o.at(k, j).is_zero()) continue;
                p.at(i, j) += x * o.at(k, j);
            }
        }
    return p;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix sum shape mismatch");
    Matrix s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] + o.a_[i];
    return s;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix difference shape mismatch");
    Matrix s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] - o.a_[i];
    return s;
}

Matrix Matrix::scaled(const Rational& c) const {
    Matrix s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] * c;
    return s;
}

Vec Matrix::apply(const Vec& v) const {
    if (v.size() != cols_) throw InputError("matrix apply shape mismatch");
    Vec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        Rational acc(0);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (at(i, j).is_zero() || v[j].is_zero()) continue;
            acc += at(i, j) * v[j];
        }
        r[i] = acc;
    }
    return r;
}

Matrix Matrix::hcat(const Matrix& o) const {
    if (rows_ != o.rows_) throw InputError("hcat shape mismatch");
    Matrix h(rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) h.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < o.cols_; ++j) h.at(i, cols_ + j) = o.at(i, j);
    }
    return h;
}

Matrix Matrix::vcat(const Matrix& o) const {
    if (cols_ != o.cols_) throw InputError("vcat shape mismatch");
    Matrix v(rows_ + o.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) v.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < o.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) v.at(rows_ + i, j) = o.at(i, j);
    return v;
}

Matrix Matrix::kron(const Matrix& o) const {
    Matrix k(rows_ * o.rows_, cols_ * o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            if (at(i, j).is_zero()) continue;
            for (std::size_t p = 0; p < o.rows_; ++p)
                for (std::size_t q = 0; q < o.cols_; ++q)
                    k.at(i * o.rows_ + p, j * o.cols_ + q) = at(i, j) * o.at(p, q);
        }
    return k;
}

Matrix Matrix::column_basis() const {
    Matrix copy = *this;
    std::vector<std::size_t> piv = rref(copy);
    Matrix b(rows_, piv.size());
    for (std::size_t j = 0; j < piv.size(); ++j)
        for (std::size_t i = 0; i < rows_; ++i) b.at(i, j) = at(i, piv[j]);
    return b;
}

std::vector<std::size_t> rref(Matrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(row, j));
        Rational inv = m.at(row, col).inverse();
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            Rational f = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rank(const Matrix& m) {
    Matrix copy = m;
    return rref(copy).size();
}

Matrix kernel_basis(const Matrix& m) {
    Matrix red = m;
    std::vector<std::size_t> piv = rref(red);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix k(m.cols(), free_cols.size());
    for (std::size_t fj = 0; fj < free_cols.size(); ++fj) {
        std::size_t fc = free_cols[fj];
        k.at(fc, fj) = Rational(1);
        for (std::size_t pi = 0; pi < piv.size(); ++pi)
            k.at(piv[pi], fj) = -red.at(pi, fc);
    }
    return k;
}

std::optional<Vec> solve_linear(const Matrix& a, const Vec& b) {
    if (b.size() != a.rows()) throw InputError("solve_linear shape mismatch");
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    std::vector<std::size_t> piv = rref(aug);
    if (!piv.empty() && piv.back() == a.cols()) return std::nullopt; // 0 = 1 row
    Vec x(a.cols(), Rational(0));
    for (std::size_t pi = 0; pi < piv.size(); ++pi)
        x[piv[pi]] = aug.at(pi, a.cols());
    return x;
}

std::optional<Matrix> solve_linear_many(const Matrix& a, const Matrix& b) {
    if (b.rows() != a.rows()) throw InputError("solve_linear_many shape mismatch");
    SolvedSystem sys(a);
    Matrix x(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        Vec col(b.rows());
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b.at(i, j);
        auto sol = sys.solve(col);
        if (!sol) return std::nullopt;
        for (std::size_t i = 0; i < a.cols(); ++i) x.at(i, j) = (*sol)[i];
    }
    return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputError("inverse of non-square matrix");
    Matrix aug = m.hcat(Matrix::identity(m.rows()));
    std::vector<std::size_t> piv = rref(aug);
    // A singular matrix still yields pivots, but some land in the identity
    // block; invertibility needs all of them in the first n columns.
    if (piv.size() != m.rows() || (!piv.empty() && piv.back() >= m.rows()))
        return std::nullopt;
    Matrix inv(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.rows(); ++j) inv.at(i, j) = aug.at(i, m.cols() + j);
    return inv;
}

bool in_column_span(const Matrix& m, const Vec& v) {
    return solve_linear(m, v).has_value();
}

SolvedSystem::SolvedSystem(Matrix a) : rows_(a.rows()), cols_(a.cols()) {
    // Reduce [A | I]; the right block records the row operations, so each
    // new b is processed by a matrix-vector product instead of a fresh
    // elimination.
    red_ = a.hcat(Matrix::identity(rows_));
    // Restrict pivot search to the A-block: run rref manually over cols_.
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
        std::size_t sel = row;
        while (sel < rows_ && red_.at(sel, col).is_zero()) ++sel;
        if (sel == rows_) continue;
        if (sel != row)
            for (std::size_t j = 0; j < red_.cols(); ++j) std::swap(red_.at(sel, j), red_.at(row, j));
        Rational inv = red_.at(row, col).inverse();
        for (std::size_t j = 0; j < red_.cols(); ++j) red_.at(row, j) *= inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row || red_.at(i, col).is_zero()) continue;
            Rational f = red_.at(i, col);
            for (std::size_t j = 0; j < red_.cols(); ++j)
                red_.at(i, j) -= f * red_.at(row, j);
        }
        pivots_.push_back(col);
        ++row;
    }
}

std::optional<Vec> SolvedSystem::solve(const Vec& b) const {
    if (b.size() != rows_) throw InputError("SolvedSystem::solve shape mismatch");
    // c = R b where R is the recorded row-operation matrix.
    Vec c(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i) {
        Rational acc(0);
        for (std::size_t j = 0; j < rows_; ++j) {
            if (red_.at(i, cols_ + j).is_zero() || b[j].is_zero()) continue;
            acc += red_.at(i, cols_ + j) * b[j];
        }
        c[i] = acc;
    }
    // Consistency: rows beyond the pivot rows must have zero rhs.
    for (std::size_t i = pivots_.size(); i < rows_; ++i)
        if (!c[i].is_zero()) return std::nullopt;
    Vec x(cols_, Rational(0));
    for (std::size_t pi = 0; pi < pivots_.size(); ++pi) {
        // Free variables are zero, so only the rhs column contributes.
        x[pivots_[pi]] = c[pi];
    }
    return x;
}

std::size_t cohomology_dim_at(const Matrix& d_out, const Matrix& d_in) {
    std::size_t dim_v = d_out.cols();
    if (d_in.rows() != dim_v) throw InputError("cohomology_dim_at shape mismatch");
    std::size_t ker = dim_v - rank(d_out);
    return ker - rank(d_in);
}

Matrix cohomology_representatives(const Matrix& d_out, const Matrix& d_in) {
    Matrix ker = kernel_basis(d_out);
    Matrix im = d_in.column_basis();
    // Columns of ker that are independent modulo im: row-reduce [im | ker]
    // and keep ker-columns that produce new pivots.
    Matrix joint = im.hcat(ker);
    Matrix red = joint;
    std::vector<std::size_t> piv = rref(red);
    std::vector<std::size_t> keep;
    for (auto c : piv)
        if (c >= im.cols()) keep.push_back(c - im.cols());
    Matrix reps(ker.rows(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j)
        for (std::size_t i = 0; i < ker.rows(); ++i) reps.at(i, j) = ker.at(i, keep[j]);
    return reps;
}

std::optional<Vec> cohomology_coordinates(const Matrix& reps, const Matrix& d_in, const Vec& v) {
    // Solve reps * c + d_in * y = v; return c.
    Matrix sys = reps.hcat(d_in);
    auto sol = solve_linear(sys, v);
    if (!sol) return std::nullopt;
    Vec c(reps.cols());
    for (std::size_t j = 0; j < reps.cols(); ++j) c[j] = (*sol)[j];
    return c;
}

} // namespace defo::exactalg
