#include "defo/forms.hpp"

#include <bit>

namespace defo::forms {

namespace {

// Sign of sorting dt_a ^ dt_b into dt_{a|b}: parity of the number of pairs
// (i in a, j in b) with i > j.  Masks must be disjoint.
int merge_sign(std::uint32_t a, std::uint32_t b) {
    unsigned inversions = 0;
    for (std::uint32_t rest = b; rest != 0; rest &= rest - 1) {
        unsigned j = static_cast<unsigned>(std::countr_zero(rest));
        inversions += static_cast<unsigned>(std::popcount(a >> (j + 1)));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

// Expand a wedge of linear 1-forms (each given by its dt-coefficients over
// m variables) into a mask -> coefficient table.
std::map<std::uint32_t, Rational> wedge_linear(std::size_t m,
                                               const std::vector<std::vector<Rational>>& lins) {
    std::map<std::uint32_t, Rational> acc;
    acc[0] = Rational(1);
    for (const auto& lin : lins) {
        if (lin.size() != m) throw InputError("wedge_linear: length mismatch");
        std::map<std::uint32_t, Rational> next;
        for (const auto& [mask, c] : acc) {
            for (std::size_t j = 0; j < m; ++j) {
                if (lin[j].is_zero()) continue;
                std::uint32_t bit = std::uint32_t(1) << j;
                if (mask & bit) continue;
                // Append dt_j on the right, then bubble it left past the
                // factors with larger index.
                unsigned larger = static_cast<unsigned>(std::popcount(mask >> (j + 1)));
                Rational v = c * lin[j];
                if (larger % 2 != 0) v = -v;
                auto [it, fresh] = next.try_emplace(mask | bit, v);
                if (!fresh) it->second += v;
            }
        }
        for (auto it = next.begin(); it != next.end();) {
            if (it->second.is_zero()) it = next.erase(it); else ++it;
        }
        acc = std::move(next);
    }
    return acc;
}

// Pull back f along a substitution sending variable i (1-based) to
// t_images[i-1] and dt_i to the linear form dt_images[i-1], both over the
// m variables of the target simplex.
PolyForm pullback(const PolyForm& f, std::size_t m,
                  const std::vector<MPoly>& t_images,
                  const std::vector<std::vector<Rational>>& dt_images) {
    PolyForm out(m, f.cap());
    for (const auto& [mask, p] : f.terms()) {
        MPoly psub = p.substitute(t_images);
        if (psub.is_zero()) continue;
        std::vector<std::vector<Rational>> lins;
        for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
            unsigned j = static_cast<unsigned>(std::countr_zero(rest));
            lins.push_back(dt_images[j]);
        }
        for (const auto& [wmask, wc] : wedge_linear(m, lins)) {
            out.add_term(wmask, psub * wc);
        }
    }
    return out;
}

} // namespace

void PolyForm::check_cap(const MPoly& p) const {
    if (p.degree() > cap_) {
        throw DegreeBudgetExceeded("polynomial degree " + std::to_string(p.degree()) +
                                   " exceeds cap " + std::to_string(cap_));
    }
}

void PolyForm::add_term(std::uint32_t dt_mask, const MPoly& coeff) {
    if (coeff.is_zero()) return;
    if (coeff.nvars() != n_) throw InputError("PolyForm: coefficient variable count mismatch");
    if (dt_mask >= (std::uint32_t(1) << n_)) throw InputError("PolyForm: dt index out of range");
    check_cap(coeff);
    auto [it, fresh] = terms_.try_emplace(dt_mask, coeff);
    if (!fresh) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

PolyForm PolyForm::scalar(std::size_t n, unsigned cap, const Rational& c) {
    PolyForm f(n, cap);
    f.add_term(0, MPoly(n, c));
    return f;
}

PolyForm PolyForm::from_poly(std::size_t n, unsigned cap, const MPoly& p) {
    PolyForm f(n, cap);
    f.add_term(0, p);
    return f;
}

PolyForm PolyForm::term(std::size_t n, unsigned cap, const MPoly& coeff, std::uint32_t dt_mask) {
    PolyForm f(n, cap);
    f.add_term(dt_mask, coeff);
    return f;
}

MPoly PolyForm::coefficient(std::uint32_t dt_mask) const {
    auto it = terms_.find(dt_mask);
    return it == terms_.end() ? MPoly(n_) : it->second;
}

std::optional<unsigned> PolyForm::form_degree() const {
    if (terms_.empty()) return 0u;
    unsigned deg = static_cast<unsigned>(std::popcount(terms_.begin()->first));
    for (const auto& [mask, p] : terms_) {
        if (static_cast<unsigned>(std::popcount(mask)) != deg) return std::nullopt;
    }
    return deg;
}

Rational PolyForm::scalar_value() const {
    if (n_ != 0) throw InputError("scalar_value: form lives on a positive-dimensional simplex");
    if (terms_.empty()) return Rational(0);
    return terms_.begin()->second.constant_term();
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
    if (n_ != o.n_) throw InputError("PolyForm: simplex dimension mismatch");
    if (o.cap_ < cap_) cap_ = o.cap_;
    for (const auto& [mask, p] : o.terms_) add_term(mask, p);
    return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
    if (n_ != o.n_) throw InputError("PolyForm: simplex dimension mismatch");
    if (o.cap_ < cap_) cap_ = o.cap_;
    for (const auto& [mask, p] : o.terms_) add_term(mask, -p);
    return *this;
}

PolyForm PolyForm::operator-() const {
    PolyForm out(n_, cap_);
    for (const auto& [mask, p] : terms_) out.terms_.emplace(mask, -p);
    return out;
}

PolyForm PolyForm::scaled(const Rational& c) const {
    PolyForm out(n_, cap_);
    if (c.is_zero()) return out;
    for (const auto& [mask, p] : terms_) out.terms_.emplace(mask, p * c);
    return out;
}

PolyForm omega_mul(const PolyForm& f, const PolyForm& g) {
    if (f.simplex_dim() != g.simplex_dim()) {
        throw InputError("omega_mul: simplex dimension mismatch");
    }
    PolyForm out(f.simplex_dim(), std::min(f.cap(), g.cap()));
    for (const auto& [ma, pa] : f.terms()) {
        for (const auto& [mb, pb] : g.terms()) {
            if (ma & mb) continue;
            int sign = merge_sign(ma, mb);
            MPoly prod = pa * pb;
            out.add_term(ma | mb, sign > 0 ? prod : -prod);
        }
    }
    return out;
}

PolyForm omega_d(const PolyForm& f) {
    std::size_t n = f.simplex_dim();
    PolyForm out(n, f.cap());
    for (const auto& [mask, p] : f.terms()) {
        for (std::size_t j = 0; j < n; ++j) {
            std::uint32_t bit = std::uint32_t(1) << j;
            if (mask & bit) continue;
            MPoly dp = p.derivative(j);
            if (dp.is_zero()) continue;
            unsigned below = static_cast<unsigned>(std::popcount(mask & (bit - 1)));
            out.add_term(mask | bit, below % 2 == 0 ? dp : -dp);
        }
    }
    return out;
}

PolyForm face(unsigned k, const PolyForm& f) {
    std::size_t n = f.simplex_dim();
    if (n == 0) throw InputError("face: no faces on the 0-simplex");
    if (k > n) throw InputError("face: index out of range");
    std::size_t m = n - 1;
    std::vector<MPoly> t_images;
    std::vector<std::vector<Rational>> dt_images;
    t_images.reserve(n);
    dt_images.reserve(n);
    if (k == 0) {
        // Vertex 0 is dropped: the new barycentric coordinate 0 is the old
        // coordinate 1, so t_1 becomes 1 - sum of the target variables.
        MPoly t1(m, Rational(1));
        for (std::size_t j = 0; j < m; ++j) t1 -= MPoly::variable(m, j);
        t_images.push_back(t1);
        dt_images.push_back(std::vector<Rational>(m, Rational(-1)));
        for (std::size_t i = 2; i <= n; ++i) {
            t_images.push_back(MPoly::variable(m, i - 2));
            std::vector<Rational> e(m, Rational(0));
            e[i - 2] = Rational(1);
            dt_images.push_back(std::move(e));
        }
    } else {
        for (std::size_t i = 1; i <= n; ++i) {
            if (i == k) {
                t_images.push_back(MPoly(m));
                dt_images.push_back(std::vector<Rational>(m, Rational(0)));
            } else {
                std::size_t j = (i < k) ? i - 1 : i - 2;
                t_images.push_back(MPoly::variable(m, j));
                std::vector<Rational> e(m, Rational(0));
                e[j] = Rational(1);
                dt_images.push_back(std::move(e));
            }
        }
    }
    return pullback(f, m, t_images, dt_images);
}

Rational integrate(const PolyForm& f) {
    std::size_t n = f.simplex_dim();
    std::uint32_t full = (std::uint32_t(1) << n) - 1;
    Rational total(0);
    for (const auto& [mask, p] : f.terms()) {
        if (mask != full) throw InputError("integrate: form is not top-degree");
        for (const auto& [e, c] : p.terms()) {
            Rational num(1);
            unsigned sum = 0;
            for (std::uint32_t ei : e) {
                num = num * Rational::factorial(ei);
                sum += ei;
            }
            total += c * num / Rational::factorial(static_cast<unsigned>(n) + sum);
        }
    }
    return total;
}

MPoly bary_t(std::size_t n, unsigned i) {
    if (i > n) throw InputError("bary_t: index out of range");
    if (i == 0) {
        MPoly p(n, Rational(1));
        for (std::size_t j = 0; j < n; ++j) p -= MPoly::variable(n, j);
        return p;
    }
    return MPoly::variable(n, i - 1);
}

std::vector<Rational> bary_dt(std::size_t n, unsigned i) {
    if (i > n) throw InputError("bary_dt: index out of range");
    if (i == 0) return std::vector<Rational>(n, Rational(-1));
    std::vector<Rational> e(n, Rational(0));
    e[i - 1] = Rational(1);
    return e;
}

PolyForm whitney_form(std::size_t n, unsigned cap, const std::vector<unsigned>& indices) {
    if (indices.empty()) throw InputError("whitney_form: empty vertex set");
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] > n) throw InputError("whitney_form: vertex index out of range");
        if (j > 0 && indices[j - 1] >= indices[j]) {
            throw InputError("whitney_form: vertex indices must be strictly increasing");
        }
    }
    std::size_t k = indices.size() - 1;
    PolyForm out(n, cap);
    Rational kfact = Rational::factorial(static_cast<unsigned>(k));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        std::vector<std::vector<Rational>> lins;
        for (std::size_t l = 0; l < indices.size(); ++l) {
            if (l != j) lins.push_back(bary_dt(n, indices[l]));
        }
        MPoly pref = bary_t(n, indices[j]) * kfact;
        if (j % 2 != 0) pref = -pref;
        for (const auto& [mask, c] : wedge_linear(n, lins)) {
            out.add_term(mask, pref * c);
        }
    }
    return out;
}

PolyForm restrict_edge(const PolyForm& f) {
    if (f.simplex_dim() != 2) throw InputError("restrict_edge: expected a form on the 2-simplex");
    return face(2, f);
}

PolyForm poly_divide(const PolyForm& f, const MPoly& g) {
    PolyForm out(f.simplex_dim(), f.cap());
    for (const auto& [mask, p] : f.terms()) {
        out.add_term(mask, p.exact_divide(g));
    }
    return out;
}

} // namespace defo::forms
