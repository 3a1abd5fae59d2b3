#include "defo/artin.hpp"

#include <algorithm>

namespace defo::artin {

using exactalg::in_column_span;
using exactalg::rank;
using exactalg::rref;
using exactalg::solve_linear;
using exactalg::solve_linear_many;

ArtinAlgebra::ArtinAlgebra(std::vector<std::string> basis_names,
                           std::vector<std::vector<Vec>> products)
    : names_(std::move(basis_names)), products_(std::move(products)) {
    const std::size_t r = names_.size();
    if (r == 0) throw InputError("ArtinAlgebra: empty ideal basis is not supported");
    if (products_.size() != r) throw InputError("ArtinAlgebra: product table has wrong row count");
    for (const auto& row : products_) {
        if (row.size() != r) throw InputError("ArtinAlgebra: product table has wrong column count");
        for (const auto& entry : row)
            if (entry.size() != r)
                throw InputError("ArtinAlgebra: product entry has wrong coefficient count");
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (products_[i][j] != products_[j][i])
                throw MathCheckError("ArtinAlgebra: product table is not commutative");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                Vec left = multiply(products_[i][j], basis_element(k));
                Vec right = multiply(basis_element(i), products_[j][k]);
                if (left != right)
                    throw MathCheckError("ArtinAlgebra: product table is not associative");
            }

    // Powers of the ideal: m^1 = everything; m^{k+1} spanned by products of
    // basis elements with spanning columns of m^k.
    power_spans_.push_back(Matrix::identity(r));
    while (power_spans_.back().cols() > 0) {
        if (power_spans_.size() > r + 1)
            throw MathCheckError("ArtinAlgebra: ideal is not nilpotent");
        const Matrix& prev = power_spans_.back();
        Matrix prods(r, r * prev.cols());
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t c = 0; c < prev.cols(); ++c) {
                Vec col(r);
                for (std::size_t t = 0; t < r; ++t) col[t] = prev.at(t, c);
                Vec p = multiply(basis_element(i), col);
                for (std::size_t t = 0; t < r; ++t) prods.at(t, i * prev.cols() + c) = p[t];
            }
        power_spans_.push_back(prods.column_basis());
    }
    nilpotency_ = static_cast<unsigned>(power_spans_.size());

    // Adapted basis: for each level k pick columns of m^k completing a basis
    // of m^{k+1}, giving coordinates that decouple the m-adic filtration.
    std::vector<Vec> adapted_cols;
    for (unsigned k = 1; k < nilpotency_; ++k) {
        const Matrix& cur = power_span(k);
        const Matrix& next = power_span(k + 1);
        Matrix probe = next.hcat(cur);
        Matrix work = probe;
        std::vector<std::size_t> piv = rref(work);
        for (std::size_t p : piv) {
            if (p < next.cols()) continue;  // already in m^{k+1}
            Vec col(dim());
            for (std::size_t t = 0; t < dim(); ++t) col[t] = probe.at(t, p);
            adapted_cols.push_back(col);
            adapted_levels_.push_back(k);
        }
    }
    if (adapted_cols.size() != r)
        throw MathCheckError("ArtinAlgebra: adapted basis has wrong size");
    adapted_ = Matrix(r, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t t = 0; t < r; ++t) adapted_.at(t, j) = adapted_cols[j][t];
    auto inv = exactalg::inverse(adapted_);
    if (!inv) throw MathCheckError("ArtinAlgebra: adapted basis is singular");
    adapted_inv_ = *inv;
}

Vec ArtinAlgebra::basis_element(std::size_t i) const {
    Vec v = zero();
    v.at(i) = Rational(1);
    return v;
}

Vec ArtinAlgebra::multiply(const Vec& u, const Vec& v) const {
    const std::size_t r = dim();
    if (u.size() != r || v.size() != r)
        throw InputError("ArtinAlgebra::multiply: coefficient length mismatch");
    Vec out = zero();
    for (std::size_t i = 0; i < r; ++i) {
        if (u[i].is_zero()) continue;
        for (std::size_t j = 0; j < r; ++j) {
            if (v[j].is_zero()) continue;
            Rational c = u[i] * v[j];
            const Vec& e = products_[i][j];
            for (std::size_t t = 0; t < r; ++t) out[t] += c * e[t];
        }
    }
    return out;
}

const Matrix& ArtinAlgebra::power_span(unsigned k) const {
    if (k == 0 || k > nilpotency_) throw InputError("ArtinAlgebra::power_span: bad power");
    return power_spans_[k - 1];
}

Vec ArtinAlgebra::to_adapted(const Vec& v) const { return adapted_inv_.apply(v); }
Vec ArtinAlgebra::from_adapted(const Vec& v) const { return adapted_.apply(v); }

unsigned ArtinAlgebra::valuation(const Vec& v) const {
    Vec a = to_adapted(v);
    unsigned val = nilpotency_;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (!a[j].is_zero()) val = std::min(val, adapted_levels_[j]);
    return val;
}

ArtinAlgebra make_dual_numbers(unsigned n) {
    if (n < 2) throw InputError("make_dual_numbers: need n >= 2");
    const std::size_t r = n - 1;  // basis eps^1 .. eps^{n-1}
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= r; ++i)
        names.push_back(i == 1 ? "eps" : "eps^" + std::to_string(i));
    std::vector<std::vector<Vec>> products(r, std::vector<Vec>(r, Vec(r, Rational(0))));
    for (std::size_t i = 1; i <= r; ++i)
        for (std::size_t j = 1; j <= r; ++j)
            if (i + j <= r) products[i - 1][j - 1][i + j - 1] = Rational(1);
    return ArtinAlgebra(std::move(names), std::move(products));
}

SmallExtension::SmallExtension(ArtinAlgebra total, ArtinAlgebra base, Matrix projection,
                               std::vector<Vec> kernel_basis)
    : total_(std::move(total)), base_(std::move(base)), projection_(std::move(projection)),
      kernel_(std::move(kernel_basis)) {
    const std::size_t rb = total_.dim(), ra = base_.dim();
    if (projection_.rows() != ra || projection_.cols() != rb)
        throw InputError("SmallExtension: projection has wrong shape");
    if (rank(projection_) != ra)
        throw MathCheckError("SmallExtension: projection is not surjective");
    // Algebra morphism on basis products.
    for (std::size_t i = 0; i < rb; ++i)
        for (std::size_t j = 0; j < rb; ++j) {
            Vec lhs = projection_.apply(total_.product_entry(i, j));
            Vec rhs = base_.multiply(projection_.apply(total_.basis_element(i)),
                                     projection_.apply(total_.basis_element(j)));
            if (lhs != rhs)
                throw MathCheckError("SmallExtension: projection is not an algebra morphism");
        }
    // Kernel description: right size, independent, inside ker, spanning it.
    if (kernel_.size() != rb - ra)
        throw MathCheckError("SmallExtension: kernel basis has wrong size");
    kernel_matrix_ = Matrix(rb, kernel_.size());
    for (std::size_t c = 0; c < kernel_.size(); ++c) {
        if (kernel_[c].size() != rb)
            throw InputError("SmallExtension: kernel vector has wrong length");
        for (std::size_t t = 0; t < rb; ++t) kernel_matrix_.at(t, c) = kernel_[c][t];
    }
    if (rank(kernel_matrix_) != kernel_.size())
        throw MathCheckError("SmallExtension: kernel basis is dependent");
    for (const auto& v : kernel_) {
        Vec image = projection_.apply(v);
        if (!std::all_of(image.begin(), image.end(),
                         [](const Rational& c) { return c.is_zero(); }))
            throw MathCheckError("SmallExtension: kernel vector not in the kernel");
    }
    // J * m_B = 0.
    for (const auto& v : kernel_)
        for (std::size_t i = 0; i < rb; ++i) {
            Vec p = total_.multiply(v, total_.basis_element(i));
            if (!std::all_of(p.begin(), p.end(), [](const Rational& c) { return c.is_zero(); }))
                throw MathCheckError("SmallExtension: kernel is not annihilated by the ideal");
        }
    // Section: solve projection * S = identity column by column.
    auto sec = solve_linear_many(projection_, Matrix::identity(ra));
    if (!sec) throw MathCheckError("SmallExtension: no section found");
    section_ = *sec;
    // Section image meets the kernel trivially.
    if (rank(section_.hcat(kernel_matrix_)) != rb)
        throw MathCheckError("SmallExtension: section image meets the kernel");
}

Vec SmallExtension::project(const Vec& v) const { return projection_.apply(v); }
Vec SmallExtension::lift(const Vec& v) const { return section_.apply(v); }

std::optional<Vec> SmallExtension::kernel_coordinates(const Vec& v) const {
    return solve_linear(kernel_matrix_, v);
}

std::vector<SmallExtension> small_extension_chain(unsigned n) {
    if (n < 3) throw InputError("small_extension_chain: need n >= 3");
    std::vector<SmallExtension> out;
    for (unsigned k = n - 1; k >= 2; --k) {
        ArtinAlgebra big = make_dual_numbers(k + 1);   // dim k
        ArtinAlgebra small = make_dual_numbers(k);     // dim k-1
        Matrix proj(small.dim(), big.dim());
        for (std::size_t i = 0; i < small.dim(); ++i) proj.at(i, i) = Rational(1);
        Vec kb = big.zero();
        kb[big.dim() - 1] = Rational(1);  // eps^k spans the kernel
        out.emplace_back(std::move(big), std::move(small), std::move(proj),
                         std::vector<Vec>{kb});
    }
    return out;
}

} // namespace defo::artin
