#include "defo/tw.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace defo::tw {

namespace {

// (-1)^{form degree} applied termwise.
PolyForm sign_by_form_parity(const PolyForm& w) {
    PolyForm out(w.simplex_dim(), w.cap());
    for (const auto& [mask, p] : w.terms()) {
        out.add_term(mask, std::popcount(mask) % 2 == 0 ? p : -p);
    }
    return out;
}

// Flip the sign of odd-form-degree terms when flip is odd.
PolyForm sign_by_partner_parity(const PolyForm& w, int flip_degree) {
    if (flip_degree % 2 == 0) return w;
    return sign_by_form_parity(w);
}

void require_total_degree(const FormElem& x, int target, const char* what) {
    for (const auto& [deg, slots] : x.components()) {
        for (const auto& w : slots) {
            for (const auto& [mask, p] : w.terms()) {
                if (!p.is_zero() && deg + static_cast<int>(std::popcount(mask)) != target) {
                    throw InputError(std::string(what) + ": element must have total degree " +
                                     std::to_string(target));
                }
            }
        }
    }
}

// GradedMap blocks ⊗ identity of the r Artinian slots, applied to a plain
// graded element.
GradedElement apply_tensored(const GradedMap& f, std::size_t r, const GradedElement& x) {
    GradedElement out;
    for (const auto& [deg, comp] : x.components()) {
        const std::size_t n_in = f.source().dim(deg);
        const std::size_t n_out = f.target().dim(deg + f.shift());
        if (n_in == 0) {
            for (const auto& c : comp) {
                if (!c.is_zero()) throw InputError("apply_tensored: element outside source");
            }
            continue;
        }
        if (comp.size() != n_in * r) throw InputError("apply_tensored: slot count mismatch");
        if (n_out == 0) continue;
        Matrix block = f.block(deg);
        Vec o(n_out * r, Rational(0));
        for (std::size_t i = 0; i < n_out; ++i) {
            for (std::size_t j = 0; j < n_in; ++j) {
                if (block.at(i, j).is_zero()) continue;
                for (std::size_t a = 0; a < r; ++a) {
                    o[i * r + a] += comp[j * r + a] * block.at(i, j);
                }
            }
        }
        out.set_component(deg + f.shift(), std::move(o));
    }
    return out;
}

Matrix column_matrix(const Vec& v) {
    Matrix out(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) out.at(i, 0) = v[i];
    return out;
}

GradedElement basis_element(const GradedSpace& V, int deg, std::size_t idx) {
    Vec v(V.dim(deg), Rational(0));
    v[idx] = Rational(1);
    GradedElement e;
    e.set_component(deg, std::move(v));
    return e;
}

std::vector<Expo> monomials_up_to(std::size_t nvars, unsigned cap) {
    std::vector<Expo> out;
    Expo cur(nvars, 0);
    // Lexicographic enumeration by recursion over positions.
    auto rec = [&](auto&& self, std::size_t pos, unsigned remaining) -> void {
        if (pos == nvars) {
            out.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= remaining; ++e) {
            cur[pos] = e;
            self(self, pos + 1, remaining - e);
            cur[pos] = 0;
        }
    };
    rec(rec, 0, cap);
    return out;
}

} // namespace

// ------------------------------------------------------------------ FormElem

std::vector<PolyForm> FormElem::component(int degree, std::size_t expected_dim) const {
    auto it = comps_.find(degree);
    if (it == comps_.end()) return std::vector<PolyForm>(expected_dim, PolyForm(n_, cap_));
    if (it->second.size() != expected_dim) {
        throw InputError("FormElem: component has wrong slot count");
    }
    return it->second;
}

void FormElem::set_component(int degree, std::vector<PolyForm> v) {
    bool all_zero = true;
    for (const auto& w : v) {
        if (!w.is_zero()) {
            all_zero = false;
            if (w.simplex_dim() != n_) throw InputError("FormElem: simplex dimension mismatch");
        }
    }
    if (all_zero) {
        comps_.erase(degree);
    } else {
        comps_[degree] = std::move(v);
    }
}

void FormElem::add_to_slot(int degree, std::size_t expected_dim, std::size_t idx,
                           const PolyForm& f) {
    if (f.is_zero()) return;
    auto v = component(degree, expected_dim);
    v[idx] += f;
    set_component(degree, std::move(v));
}

bool FormElem::is_zero() const {
    for (const auto& [deg, slots] : comps_) {
        for (const auto& w : slots) {
            if (!w.is_zero()) return false;
        }
    }
    return true;
}

std::vector<int> FormElem::degrees() const {
    std::vector<int> out;
    for (const auto& [deg, slots] : comps_) out.push_back(deg);
    return out;
}

FormElem& FormElem::operator+=(const FormElem& o) {
    if (comps_.empty() && n_ == 0) {
        n_ = o.n_;
        cap_ = o.cap_;
    }
    if (o.comps_.empty()) return *this;
    if (n_ != o.n_) throw InputError("FormElem: simplex dimension mismatch");
    for (const auto& [deg, slots] : o.comps_) {
        auto it = comps_.find(deg);
        if (it == comps_.end()) {
            set_component(deg, slots);
            continue;
        }
        if (it->second.size() != slots.size()) {
            throw InputError("FormElem: slot count mismatch in addition");
        }
        auto v = it->second;
        for (std::size_t i = 0; i < slots.size(); ++i) v[i] += slots[i];
        set_component(deg, std::move(v));
    }
    return *this;
}

FormElem& FormElem::operator-=(const FormElem& o) { return (*this += (-o)); }

FormElem FormElem::operator-() const {
    FormElem out(n_, cap_);
    for (const auto& [deg, slots] : comps_) {
        std::vector<PolyForm> v;
        v.reserve(slots.size());
        for (const auto& w : slots) v.push_back(-w);
        out.comps_[deg] = std::move(v);
    }
    return out;
}

FormElem FormElem::scaled(const Rational& c) const {
    FormElem out(n_, cap_);
    if (c.is_zero()) return out;
    for (const auto& [deg, slots] : comps_) {
        std::vector<PolyForm> v;
        v.reserve(slots.size());
        for (const auto& w : slots) v.push_back(w.scaled(c));
        out.comps_[deg] = std::move(v);
    }
    return out;
}

FormElem FormElem::form_scaled(const PolyForm& w) const {
    FormElem out(n_, cap_);
    for (const auto& [deg, slots] : comps_) {
        std::vector<PolyForm> v;
        v.reserve(slots.size());
        for (const auto& s : slots) v.push_back(forms::omega_mul(w, s));
        out.set_component(deg, std::move(v));
    }
    return out;
}

bool operator==(const FormElem& a, const FormElem& b) {
    if (a.is_zero() && b.is_zero()) return true;
    FormElem diff = a;
    diff -= b;
    return diff.is_zero();
}

FormElem constant_form(std::size_t n, unsigned cap, const GradedElement& v) {
    FormElem out(n, cap);
    for (const auto& [deg, comp] : v.components()) {
        std::vector<PolyForm> slots;
        slots.reserve(comp.size());
        for (const auto& c : comp) slots.push_back(PolyForm::scalar(n, cap, c));
        out.set_component(deg, std::move(slots));
    }
    return out;
}

GradedElement point_value(const FormElem& x) {
    if (x.simplex_dim() != 0) throw InputError("point_value: not a 0-simplex element");
    GradedElement out;
    for (const auto& [deg, slots] : x.components()) {
        Vec v(slots.size(), Rational(0));
        for (std::size_t i = 0; i < slots.size(); ++i) v[i] = slots[i].scalar_value();
        out.set_component(deg, std::move(v));
    }
    return out;
}

GradedElement eval_scalar(const FormElem& x, const std::vector<Rational>& point) {
    GradedElement out;
    for (const auto& [deg, slots] : x.components()) {
        Vec v(slots.size(), Rational(0));
        for (std::size_t i = 0; i < slots.size(); ++i) {
            for (const auto& [mask, p] : slots[i].terms()) {
                if (mask != 0) throw InputError("eval_scalar: element has a dt-part");
                v[i] = p.eval(point);
            }
        }
        out.set_component(deg, std::move(v));
    }
    return out;
}

FormElem form_tensor(const PolyForm& w, const GradedElement& v) {
    FormElem out(w.simplex_dim(), w.cap());
    for (const auto& [deg, comp] : v.components()) {
        std::vector<PolyForm> slots;
        slots.reserve(comp.size());
        for (const auto& c : comp) slots.push_back(w.scaled(c));
        out.set_component(deg, std::move(slots));
    }
    return out;
}

FormElem level_d(const dgla::Dgla& L, std::size_t r, const FormElem& x) {
    FormElem out(x.simplex_dim(), x.cap());
    for (const auto& [deg, slots] : x.components()) {
        const std::size_t n_in = L.space().dim(deg);
        if (slots.size() != n_in * r) throw InputError("level_d: slot count mismatch");
        // Form-side differential, same algebra slot.
        std::vector<PolyForm> dpart = out.component(deg, slots.size());
        bool any = false;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            PolyForm dw = forms::omega_d(slots[i]);
            if (!dw.is_zero()) {
                dpart[i] += dw;
                any = true;
            }
        }
        if (any) out.set_component(deg, std::move(dpart));
        // Algebra-side differential with the form-parity sign.
        const std::size_t n_out = L.space().dim(deg + 1);
        if (n_out == 0) continue;
        Matrix block = L.d().block(deg);
        std::vector<PolyForm> target = out.component(deg + 1, n_out * r);
        bool touched = false;
        for (std::size_t j = 0; j < n_in; ++j) {
            for (std::size_t a = 0; a < r; ++a) {
                const PolyForm& w = slots[j * r + a];
                if (w.is_zero()) continue;
                PolyForm signed_w = sign_by_form_parity(w);
                for (std::size_t i = 0; i < n_out; ++i) {
                    if (block.at(i, j).is_zero()) continue;
                    target[i * r + a] += signed_w.scaled(block.at(i, j));
                    touched = true;
                }
            }
        }
        if (touched) out.set_component(deg + 1, std::move(target));
    }
    return out;
}

FormElem face_form(unsigned k, const FormElem& x) {
    if (x.simplex_dim() == 0) {
        if (x.is_zero()) return FormElem();
        throw InputError("face_form: the 0-simplex has no faces");
    }
    FormElem out(x.simplex_dim() - 1, x.cap());
    for (const auto& [deg, slots] : x.components()) {
        std::vector<PolyForm> v;
        v.reserve(slots.size());
        for (const auto& w : slots) v.push_back(forms::face(k, w));
        out.set_component(deg, std::move(v));
    }
    return out;
}

FormElem apply_map_form(const GradedMap& f, std::size_t r, const FormElem& x) {
    FormElem out(x.simplex_dim(), x.cap());
    for (const auto& [deg, slots] : x.components()) {
        const std::size_t n_in = f.source().dim(deg);
        const std::size_t n_out = f.target().dim(deg + f.shift());
        if (n_in == 0) {
            for (const auto& w : slots) {
                if (!w.is_zero()) throw InputError("apply_map_form: element outside source");
            }
            continue;
        }
        if (slots.size() != n_in * r) throw InputError("apply_map_form: slot count mismatch");
        if (n_out == 0) continue;
        Matrix block = f.block(deg);
        std::vector<PolyForm> target = out.component(deg + f.shift(), n_out * r);
        for (std::size_t i = 0; i < n_out; ++i) {
            for (std::size_t j = 0; j < n_in; ++j) {
                if (block.at(i, j).is_zero()) continue;
                for (std::size_t a = 0; a < r; ++a) {
                    if (slots[j * r + a].is_zero()) continue;
                    target[i * r + a] += slots[j * r + a].scaled(block.at(i, j));
                }
            }
        }
        out.set_component(deg + f.shift(), std::move(target));
    }
    return out;
}

std::pair<GradedElement, GradedElement> path_endpoints(const FormElem& x) {
    if (x.simplex_dim() != 1) throw InputError("path_endpoints: not an interval element");
    return {point_value(face_form(1, x)), point_value(face_form(0, x))};
}

FormElem level_bracket(const dgla::Dgla& L, const ArtinAlgebra& A, const FormElem& x,
                       const FormElem& y) {
    const std::size_t r = A.dim();
    // Zero operands are dimension- and cap-agnostic: take the metadata from
    // the other side so an empty element never shrinks the cap to zero.
    if (x.is_zero()) return FormElem(y.simplex_dim(), y.cap());
    if (y.is_zero()) return FormElem(x.simplex_dim(), x.cap());
    if (x.simplex_dim() != y.simplex_dim()) {
        throw InputError("level_bracket: simplex dimension mismatch");
    }
    FormElem out(x.simplex_dim(), std::min(x.cap(), y.cap()));
    for (const auto& [da, xa] : x.components()) {
        for (const auto& [db, yb] : y.components()) {
            const auto& list = L.entries(da, db);
            if (list.empty()) continue;
            const std::size_t n_out = L.space().dim(da + db);
            std::vector<PolyForm> comp = out.component(da + db, n_out * r);
            bool touched = false;
            for (const auto& e : list) {
                for (std::size_t ea = 0; ea < r; ++ea) {
                    const PolyForm& wa = xa[e.idx_a * r + ea];
                    if (wa.is_zero()) continue;
                    for (std::size_t eb = 0; eb < r; ++eb) {
                        const PolyForm& wb = yb[e.idx_b * r + eb];
                        if (wb.is_zero()) continue;
                        const Vec& prod = A.product_entry(ea, eb);
                        // Skip the polynomial product when the coefficient
                        // product already vanishes in the Artinian algebra;
                        // otherwise nilpotency-killed terms could still
                        // overflow the polynomial degree cap.
                        bool live = false;
                        for (const auto& pr : prod) {
                            if (!pr.is_zero()) {
                                live = true;
                                break;
                            }
                        }
                        if (!live) continue;
                        PolyForm formprod =
                            forms::omega_mul(wa, sign_by_partner_parity(wb, da));
                        if (formprod.is_zero()) continue;
                        for (std::size_t t = 0; t < r; ++t) {
                            if (prod[t].is_zero()) continue;
                            comp[e.idx_out * r + t] += formprod.scaled(e.coeff * prod[t]);
                            touched = true;
                        }
                    }
                }
            }
            if (touched) out.set_component(da + db, std::move(comp));
        }
    }
    return out;
}

FormElem level_mc_defect(const dgla::Dgla& L, const ArtinAlgebra& A, const FormElem& x) {
    require_total_degree(x, 1, "level_mc_defect");
    FormElem out = level_d(L, A.dim(), x);
    out += level_bracket(L, A, x, x).scaled(Rational(1, 2));
    return out;
}

FormElem level_gauge(const dgla::Dgla& L, const ArtinAlgebra& A, const FormElem& a,
                     const FormElem& x) {
    require_total_degree(a, 0, "level_gauge");
    require_total_degree(x, 1, "level_gauge");
    FormElem cur = level_bracket(L, A, a, x) - level_d(L, A.dim(), a);
    FormElem out = x;
    unsigned n = 0;
    while (!cur.is_zero()) {
        out += cur.scaled(Rational(1) / Rational::factorial(n + 1));
        cur = level_bracket(L, A, a, cur);
        ++n;
        if (n > A.nilpotency_index() + 2) {
            throw MathCheckError("level_gauge: series failed to terminate");
        }
    }
    return out;
}

FormElem level_bch(const dgla::Dgla& L, const ArtinAlgebra& A, const FormElem& a,
                   const FormElem& b) {
    require_total_degree(a, 0, "level_bch");
    require_total_degree(b, 0, "level_bch");
    FormElem out(a.simplex_dim(), a.cap());
    const unsigned maxw = A.nilpotency_index() >= 2 ? A.nilpotency_index() - 1 : 1;

    struct Rec {
        const dgla::Dgla& L;
        const ArtinAlgebra& A;
        const FormElem&a, &b;
        FormElem& out;
        std::vector<std::pair<unsigned, unsigned>> blocks;

        void word_bracket_and_add(unsigned w) {
            std::vector<const FormElem*> letters;
            for (const auto& [p, q] : blocks) {
                for (unsigned i = 0; i < p; ++i) letters.push_back(&a);
                for (unsigned i = 0; i < q; ++i) letters.push_back(&b);
            }
            FormElem cur = *letters.back();
            for (std::size_t i = letters.size() - 1; i-- > 0;) {
                cur = level_bracket(L, A, *letters[i], cur);
                if (cur.is_zero()) return;
            }
            Rational denom =
                Rational(static_cast<long>(blocks.size())) * Rational(static_cast<long>(w));
            for (const auto& [p, q] : blocks) {
                denom *= Rational::factorial(p) * Rational::factorial(q);
            }
            Rational coeff = Rational(1) / denom;
            if (blocks.size() % 2 == 0) coeff = -coeff;
            out += cur.scaled(coeff);
        }

        void extend(unsigned remaining, unsigned w) {
            if (remaining == 0) {
                word_bracket_and_add(w);
                return;
            }
            for (unsigned t = 1; t <= remaining; ++t) {
                for (unsigned p = 0; p <= t; ++p) {
                    blocks.emplace_back(p, t - p);
                    extend(remaining - t, w);
                    blocks.pop_back();
                }
            }
        }
    };

    for (unsigned w = 1; w <= maxw; ++w) {
        Rec rec{L, A, a, b, out, {}};
        rec.extend(w, w);
    }
    return out;
}

unsigned form_valuation(const ArtinAlgebra& A, const FormElem& x) {
    const std::size_t r = A.dim();
    unsigned best = A.nilpotency_index();
    for (const auto& [deg, slots] : x.components()) {
        if (slots.size() % r != 0) throw InputError("form_valuation: slot count mismatch");
        const std::size_t ng = slots.size() / r;
        for (std::size_t g = 0; g < ng; ++g) {
            // Collect, per form term, the vector over the Artinian slots.
            std::map<std::pair<std::uint32_t, Expo>, Vec> byterm;
            for (std::size_t a = 0; a < r; ++a) {
                for (const auto& [mask, p] : slots[g * r + a].terms()) {
                    for (const auto& [e, c] : p.terms()) {
                        auto [it, fresh] =
                            byterm.try_emplace({mask, e}, Vec(r, Rational(0)));
                        it->second[a] = c;
                    }
                }
            }
            for (const auto& [key, vec] : byterm) {
                best = std::min(best, A.valuation(vec));
            }
        }
    }
    return best;
}

FormElem form_adapted_part(const ArtinAlgebra& A, const FormElem& x, unsigned k) {
    const std::size_t r = A.dim();
    FormElem out(x.simplex_dim(), x.cap());
    for (const auto& [deg, slots] : x.components()) {
        if (slots.size() % r != 0) throw InputError("form_adapted_part: slot count mismatch");
        const std::size_t ng = slots.size() / r;
        std::vector<PolyForm> target(slots.size(), PolyForm(x.simplex_dim(), x.cap()));
        for (std::size_t g = 0; g < ng; ++g) {
            std::map<std::pair<std::uint32_t, Expo>, Vec> byterm;
            for (std::size_t a = 0; a < r; ++a) {
                for (const auto& [mask, p] : slots[g * r + a].terms()) {
                    for (const auto& [e, c] : p.terms()) {
                        auto [it, fresh] =
                            byterm.try_emplace({mask, e}, Vec(r, Rational(0)));
                        it->second[a] = c;
                    }
                }
            }
            for (const auto& [key, vec] : byterm) {
                Vec ad = A.to_adapted(vec);
                for (std::size_t a = 0; a < r; ++a) {
                    if (A.adapted_level(a) != k) ad[a] = Rational(0);
                }
                Vec filtered = A.from_adapted(ad);
                for (std::size_t a = 0; a < r; ++a) {
                    if (filtered[a].is_zero()) continue;
                    target[g * r + a].add_term(key.first,
                                               MPoly::monomial(key.second, filtered[a]));
                }
            }
        }
        out.set_component(deg, std::move(target));
    }
    return out;
}

FormElem combine_tensored(const std::vector<FormElem>& basis, const Matrix& coeffs,
                          std::size_t r) {
    if (coeffs.rows() != basis.size()) throw InputError("combine_tensored: row mismatch");
    if (coeffs.cols() != r) throw InputError("combine_tensored: column mismatch");
    FormElem out;
    for (std::size_t b = 0; b < basis.size(); ++b) {
        for (const auto& [deg, slots] : basis[b].components()) {
            for (std::size_t g = 0; g < slots.size(); ++g) {
                if (slots[g].is_zero()) continue;
                for (std::size_t a = 0; a < r; ++a) {
                    if (coeffs.at(b, a).is_zero()) continue;
                    FormElem term(basis[b].simplex_dim(), basis[b].cap());
                    term.add_to_slot(deg, slots.size() * r, g * r + a,
                                     slots[g].scaled(coeffs.at(b, a)));
                    out += term;
                }
            }
        }
    }
    return out;
}

// ------------------------------------------------------------------- ScDgla

void check_dgla_morphism(const dgla::Dgla& src, const dgla::Dgla& dst, const GradedMap& f) {
    if (f.shift() != 0) throw MathCheckError("morphism has a nonzero degree shift");
    if (!(f.compose(src.d()) == dst.d().compose(f))) {
        throw MathCheckError("morphism does not commute with the differentials");
    }
    for (int da : src.space().degrees()) {
        for (int db : src.space().degrees()) {
            for (std::size_t ia = 0; ia < src.space().dim(da); ++ia) {
                for (std::size_t ib = 0; ib < src.space().dim(db); ++ib) {
                    GradedElement bra;
                    bra.set_component(da + db, src.bracket_basis(da, ia, db, ib));
                    GradedElement lhs = f.apply(bra);
                    GradedElement rhs =
                        dst.bracket(f.apply(basis_element(src.space(), da, ia)),
                                    f.apply(basis_element(src.space(), db, ib)));
                    if (!(lhs == rhs)) {
                        throw MathCheckError("morphism does not preserve brackets");
                    }
                }
            }
        }
    }
}

ScDgla::ScDgla(std::vector<dgla::Dgla> levels, std::vector<std::vector<GradedMap>> cofaces)
    : levels_(std::move(levels)), cofaces_(std::move(cofaces)) {
    if (levels_.empty()) throw InputError("ScDgla: at least one level required");
    if (cofaces_.size() != levels_.size() - 1) {
        throw InputError("ScDgla: coface family count must match level count");
    }
    for (std::size_t i = 1; i < levels_.size(); ++i) {
        const auto& fam = cofaces_[i - 1];
        if (fam.size() != i + 1) {
            throw InputError("ScDgla: level " + std::to_string(i) + " needs " +
                             std::to_string(i + 1) + " cofaces");
        }
        for (const auto& f : fam) {
            if (f.source() != levels_[i - 1].space() || f.target() != levels_[i].space()) {
                throw InputError("ScDgla: coface has wrong source or target");
            }
            check_dgla_morphism(levels_[i - 1], levels_[i], f);
        }
    }
    // Cosimplicial identities: composing the (k+1)-st after the l-th equals
    // the l-th after the k-th, for k >= l.
    for (std::size_t i = 1; i + 1 < levels_.size(); ++i) {
        for (std::size_t k = 0; k <= i; ++k) {
            for (std::size_t l = 0; l <= k; ++l) {
                GradedMap lhs = coface(k + 1, i + 1).compose(coface(l, i));
                GradedMap rhs = coface(l, i + 1).compose(coface(k, i));
                if (!(lhs == rhs)) {
                    throw MathCheckError("ScDgla: cosimplicial identity fails at (" +
                                         std::to_string(k) + ", " + std::to_string(l) +
                                         ", level " + std::to_string(i) + ")");
                }
            }
        }
    }
}

const dgla::Dgla& ScDgla::level(std::size_t i) const {
    if (i >= levels_.size()) throw InputError("ScDgla: level out of range");
    return levels_[i];
}

const GradedMap& ScDgla::coface(std::size_t k, std::size_t i) const {
    if (i == 0 || i >= levels_.size() || k > i) throw InputError("ScDgla: no such coface");
    return cofaces_[i - 1][k];
}

ScDgla truncate(const ScDgla& g, std::size_t m1, std::size_t m2) {
    const std::size_t M = g.top_level();
    if (m1 > m2 || m2 > M) throw InputError("truncate: bad level window");
    dgla::Dgla zero_algebra(GradedSpace(), GradedMap::zero(GradedSpace(), GradedSpace(), 1),
                            {}, dgla::CheckLevel::none);
    std::vector<dgla::Dgla> levels;
    for (std::size_t i = 0; i <= M; ++i) {
        levels.push_back(i >= m1 && i <= m2 ? g.level(i) : zero_algebra);
    }
    std::vector<std::vector<GradedMap>> cofaces;
    for (std::size_t i = 1; i <= M; ++i) {
        std::vector<GradedMap> fam;
        for (std::size_t k = 0; k <= i; ++k) {
            bool src_alive = i - 1 >= m1 && i - 1 <= m2;
            bool dst_alive = i >= m1 && i <= m2;
            if (src_alive && dst_alive) {
                fam.push_back(g.coface(k, i));
            } else {
                fam.push_back(GradedMap::zero(levels[i - 1].space(), levels[i].space(), 0));
            }
        }
        cofaces.push_back(std::move(fam));
    }
    return ScDgla(std::move(levels), std::move(cofaces));
}

AugmentedScDgla::AugmentedScDgla(dgla::Dgla base_algebra, ScDgla rest_levels,
                                 GradedMap augmentation)
    : base(std::move(base_algebra)), rest(std::move(rest_levels)), aug(std::move(augmentation)) {
    if (aug.source() != base.space() || aug.target() != rest.level(0).space()) {
        throw InputError("AugmentedScDgla: augmentation has wrong source or target");
    }
    check_dgla_morphism(base, rest.level(0), aug);
    if (rest.top_level() >= 1) {
        if (!(rest.coface(0, 1).compose(aug) == rest.coface(1, 1).compose(aug))) {
            throw MathCheckError("AugmentedScDgla: augmentation composites disagree");
        }
    }
}

// --------------------------------------------------------------- TW elements

TWElement tw_zero(const ScDgla& g, unsigned cap) {
    TWElement x;
    for (std::size_t n = 0; n <= g.top_level(); ++n) x.levels.emplace_back(n, cap);
    return x;
}

static void require_tuple(const ScDgla& g, const TWElement& x, const char* what) {
    if (x.levels.size() != g.top_level() + 1) {
        throw InputError(std::string(what) + ": tuple has wrong level count");
    }
    for (std::size_t n = 0; n < x.levels.size(); ++n) {
        if (!x.levels[n].is_zero() && x.levels[n].simplex_dim() != n) {
            throw InputError(std::string(what) + ": level lives on the wrong simplex");
        }
    }
}

bool faces_compatible(const ScDgla& g, std::size_t r, const TWElement& x) {
    require_tuple(g, x, "faces_compatible");
    for (std::size_t n = 1; n <= g.top_level(); ++n) {
        if (x.levels[n].is_zero() && x.levels[n - 1].is_zero()) continue;
        FormElem level_n = x.levels[n];
        if (level_n.is_zero()) level_n = FormElem(n, x.levels[n - 1].cap());
        for (std::size_t k = 0; k <= n; ++k) {
            FormElem lhs = face_form(static_cast<unsigned>(k), level_n);
            FormElem rhs = apply_map_form(g.coface(k, n), r, x.levels[n - 1]);
            if (!(lhs == rhs)) return false;
        }
    }
    return true;
}

void check_faces(const ScDgla& g, std::size_t r, const TWElement& x) {
    if (!faces_compatible(g, r, x)) {
        throw MathCheckError("tuple is not face-compatible");
    }
}

TWElement tw_d(const ScDgla& g, std::size_t r, const TWElement& x) {
    require_tuple(g, x, "tw_d");
    TWElement out;
    for (std::size_t n = 0; n <= g.top_level(); ++n) {
        out.levels.push_back(level_d(g.level(n), r, x.levels[n]));
    }
    return out;
}

TWElement tw_bracket(const ScDgla& g, const ArtinAlgebra& A, const TWElement& x,
                     const TWElement& y) {
    require_tuple(g, x, "tw_bracket");
    require_tuple(g, y, "tw_bracket");
    TWElement out;
    for (std::size_t n = 0; n <= g.top_level(); ++n) {
        out.levels.push_back(level_bracket(g.level(n), A, x.levels[n], y.levels[n]));
    }
    return out;
}

TWElement tw_mc_defect(const ScDgla& g, const ArtinAlgebra& A, const TWElement& x) {
    require_tuple(g, x, "tw_mc_defect");
    TWElement out;
    for (std::size_t n = 0; n <= g.top_level(); ++n) {
        out.levels.push_back(level_mc_defect(g.level(n), A, x.levels[n]));
    }
    return out;
}

TWElement tw_gauge(const ScDgla& g, const ArtinAlgebra& A, const TWElement& a,
                   const TWElement& x) {
    require_tuple(g, a, "tw_gauge");
    require_tuple(g, x, "tw_gauge");
    TWElement out;
    for (std::size_t n = 0; n <= g.top_level(); ++n) {
        out.levels.push_back(level_gauge(g.level(n), A, a.levels[n], x.levels[n]));
    }
    return out;
}

bool tw_is_mc(const ScDgla& g, const ArtinAlgebra& A, const TWElement& x) {
    require_tuple(g, x, "tw_is_mc");
    if (!faces_compatible(g, A.dim(), x)) return false;
    for (std::size_t n = 0; n <= g.top_level(); ++n) {
        if (!level_mc_defect(g.level(n), A, x.levels[n]).is_zero()) return false;
    }
    return true;
}

TWElement operator+(const TWElement& a, const TWElement& b) {
    if (a.levels.size() != b.levels.size()) throw InputError("tuple addition: level mismatch");
    TWElement out = a;
    for (std::size_t n = 0; n < out.levels.size(); ++n) out.levels[n] += b.levels[n];
    return out;
}

TWElement operator-(const TWElement& a, const TWElement& b) {
    if (a.levels.size() != b.levels.size()) {
        throw InputError("tuple subtraction: level mismatch");
    }
    TWElement out = a;
    for (std::size_t n = 0; n < out.levels.size(); ++n) out.levels[n] -= b.levels[n];
    return out;
}

bool operator==(const TWElement& a, const TWElement& b) {
    if (a.levels.size() != b.levels.size()) return false;
    for (std::size_t n = 0; n < a.levels.size(); ++n) {
        if (!(a.levels[n] == b.levels[n])) return false;
    }
    return true;
}

// -------------------------------------------------------------- Tot elements

TotElement tot_zero(const ScDgla& g, int total_degree) {
    TotElement x;
    x.total_degree = total_degree;
    x.levels.assign(g.top_level() + 1, GradedElement());
    return x;
}

static void require_tot(const ScDgla& g, const TotElement& x, const char* what) {
    if (x.levels.size() != g.top_level() + 1) {
        throw InputError(std::string(what) + ": element has wrong level count");
    }
    for (std::size_t i = 0; i < x.levels.size(); ++i) {
        auto deg = x.levels[i].homogeneous_degree();
        if (deg && *deg != x.total_degree - static_cast<int>(i)) {
            throw InputError(std::string(what) + ": level degree does not match total degree");
        }
    }
}

TotElement tot_differential(const ScDgla& g, const TotElement& x) {
    require_tot(g, x, "tot_differential");
    TotElement out = tot_zero(g, x.total_degree + 1);
    for (std::size_t i = 0; i <= g.top_level(); ++i) {
        GradedElement acc = g.level(i).d().apply(x.levels[i]);
        if (i % 2 != 0) acc = acc.scaled_by(Rational(-1));
        if (i >= 1) {
            Rational sign(1);
            for (std::size_t k = 0; k <= i; ++k) {
                acc += g.coface(k, i).apply(x.levels[i - 1]).scaled_by(sign);
                sign = -sign;
            }
        }
        out.levels[i] = std::move(acc);
    }
    return out;
}

TotElement tot_add(const TotElement& a, const TotElement& b) {
    if (a.levels.size() != b.levels.size() || a.total_degree != b.total_degree) {
        throw InputError("tot_add: mismatched elements");
    }
    TotElement out = a;
    for (std::size_t i = 0; i < out.levels.size(); ++i) out.levels[i] += b.levels[i];
    return out;
}

bool tot_equal(const TotElement& a, const TotElement& b) {
    if (a.levels.size() != b.levels.size()) return false;
    for (std::size_t i = 0; i < a.levels.size(); ++i) {
        if (!(a.levels[i] == b.levels[i])) return false;
    }
    return true;
}

TotElement integration_map(const ScDgla& g, const TWElement& x, int total_degree) {
    require_tuple(g, x, "integration_map");
    TotElement out = tot_zero(g, total_degree);
    for (std::size_t i = 0; i <= g.top_level(); ++i) {
        const FormElem& xi = x.levels[i];
        const std::uint32_t full = (std::uint32_t(1) << i) - 1;
        GradedElement val;
        for (const auto& [deg, slots] : xi.components()) {
            Vec v(slots.size(), Rational(0));
            bool nz = false;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                MPoly top = slots[s].coefficient(full);
                if (top.is_zero()) continue;
                v[s] = forms::integrate(
                    PolyForm::term(i, slots[s].cap(), top, full));
                if (!v[s].is_zero()) nz = true;
            }
            if (nz) val.set_component(deg, std::move(v));
        }
        out.levels[i] = std::move(val);
    }
    require_tot(g, out, "integration_map");
    return out;
}

TWElement whitney_map(const ScDgla& g, unsigned cap, const TotElement& y) {
    require_tot(g, y, "whitney_map");
    const std::size_t M = g.top_level();
    TWElement out = tw_zero(g, cap);
    for (std::size_t n = 0; n <= M; ++n) {
        if (y.levels[n].is_zero()) continue;
        for (std::size_t m = n; m <= M; ++m) {
            // Order-preserving injections of {0..n} into {0..m}: choose the
            // image vertex set.
            std::vector<unsigned> verts;
            auto rec = [&](auto&& self, unsigned next) -> void {
                if (verts.size() == n + 1) {
                    // Coface composite realizing this injection: insert the
                    // complement positions in increasing order.
                    GradedElement img = y.levels[n];
                    std::size_t stage = n;
                    for (unsigned b = 0; b <= m; ++b) {
                        if (std::find(verts.begin(), verts.end(), b) != verts.end()) continue;
                        img = g.coface(b, stage + 1).apply(img);
                        ++stage;
                    }
                    out.levels[m] += form_tensor(forms::whitney_form(m, cap, verts), img);
                    return;
                }
                for (unsigned v = next; v <= m; ++v) {
                    verts.push_back(v);
                    self(self, v + 1);
                    verts.pop_back();
                }
            };
            rec(rec, 0);
        }
    }
    return out;
}

TWElement augment_embed(const AugmentedScDgla& ag, unsigned cap, std::size_t r,
                        const GradedElement& x) {
    const std::size_t M = ag.rest.top_level();
    TWElement out = tw_zero(ag.rest, cap);
    GradedElement cur = apply_tensored(ag.aug, r, x);
    out.levels[0] = constant_form(0, cap, cur);
    for (std::size_t n = 1; n <= M; ++n) {
        cur = apply_tensored(ag.rest.coface(n, n), r, cur);
        out.levels[n] = constant_form(n, cap, cur);
    }
    return out;
}

// ----------------------------------------------- linear coordinates & cohomology

LevelCoords::LevelCoords(std::size_t n, unsigned cap, GradedSpace V, int total_degree)
    : n_(n), cap_(cap), space_(std::move(V)), degree_(total_degree) {
    // The window bounds the combined degree (polynomial degree plus form
    // degree) by the cap.  This filtration is preserved by the differential,
    // the face maps, and the simplicial contraction, so the windowed complex
    // computes the same cohomology as the full polynomial-form complex
    // whenever the cap has headroom over the top level.
    for (int g_deg : space_.degrees()) {
        int form_deg = degree_ - g_deg;
        if (form_deg < 0 || form_deg > static_cast<int>(n)) continue;
        if (static_cast<unsigned>(form_deg) > cap) continue;
        std::vector<Expo> monos = monomials_up_to(n, cap - static_cast<unsigned>(form_deg));
        for (std::size_t g_idx = 0; g_idx < space_.dim(g_deg); ++g_idx) {
            for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
                if (std::popcount(mask) != form_deg) continue;
                for (const auto& e : monos) {
                    lookup_[{g_deg, g_idx, mask, e}] = slots_.size();
                    slots_.push_back({g_deg, g_idx, mask, e});
                }
            }
        }
    }
}

Matrix LevelCoords::encode_slots(const FormElem& x, std::size_t r) const {
    Matrix out(slots_.size(), r);
    if (x.is_zero()) return out;
    if (x.simplex_dim() != n_) throw InputError("LevelCoords: simplex dimension mismatch");
    for (const auto& [deg, slots] : x.components()) {
        const std::size_t ng = space_.dim(deg);
        if (slots.size() != ng * r) throw InputError("LevelCoords: slot count mismatch");
        for (std::size_t g = 0; g < ng; ++g) {
            for (std::size_t a = 0; a < r; ++a) {
                for (const auto& [mask, p] : slots[g * r + a].terms()) {
                    for (const auto& [e, c] : p.terms()) {
                        auto it = lookup_.find({deg, g, mask, e});
                        if (it == lookup_.end()) {
                            throw InputError(
                                "LevelCoords: element has a term outside the window");
                        }
                        out.at(it->second, a) = c;
                    }
                }
            }
        }
    }
    return out;
}

Vec LevelCoords::encode(const FormElem& x) const {
    Matrix m = encode_slots(x, 1);
    Vec out(dim(), Rational(0));
    for (std::size_t i = 0; i < dim(); ++i) out[i] = m.at(i, 0);
    return out;
}

FormElem LevelCoords::decode(const Vec& v) const {
    if (v.size() != dim()) throw InputError("LevelCoords: wrong coordinate length");
    FormElem out(n_, cap_);
    for (std::size_t i = 0; i < dim(); ++i) {
        if (v[i].is_zero()) continue;
        const Slot& s = slots_[i];
        out.add_to_slot(s.g_deg, space_.dim(s.g_deg), s.g_idx,
                        PolyForm::term(n_, cap_, MPoly::monomial(s.expo, v[i]), s.mask));
    }
    return out;
}

namespace {

struct TotSlots {
    // (level, algebra degree, index) per total degree.
    std::map<int, std::vector<std::tuple<std::size_t, int, std::size_t>>> slots;
    std::map<int, std::map<std::tuple<std::size_t, int, std::size_t>, std::size_t>> lookup;

    explicit TotSlots(const ScDgla& g) {
        for (std::size_t i = 0; i <= g.top_level(); ++i) {
            for (int q : g.level(i).space().degrees()) {
                int j = q + static_cast<int>(i);
                for (std::size_t v = 0; v < g.level(i).space().dim(q); ++v) {
                    lookup[j][{i, q, v}] = slots[j].size();
                    slots[j].push_back({i, q, v});
                }
            }
        }
    }

    std::size_t dim(int j) const {
        auto it = slots.find(j);
        return it == slots.end() ? 0 : it->second.size();
    }

    Matrix d_matrix(const ScDgla& g, int j) const {
        Matrix out(dim(j + 1), dim(j));
        auto src = slots.find(j);
        if (src == slots.end()) return out;
        auto tgt_lookup = lookup.find(j + 1);
        for (std::size_t col = 0; col < src->second.size(); ++col) {
            auto [i, q, v] = src->second[col];
            auto put = [&](std::size_t li, int lq, std::size_t w, const Rational& c) {
                if (c.is_zero()) return;
                if (tgt_lookup == lookup.end()) {
                    throw MathCheckError("total differential leaves the slot table");
                }
                auto it = tgt_lookup->second.find({li, lq, w});
                if (it == tgt_lookup->second.end()) {
                    throw MathCheckError("total differential leaves the slot table");
                }
                out.at(it->second, col) += c;
            };
            // Levelwise differential with the level sign.
            Matrix block = g.level(i).d().block(q);
            Rational lsign(i % 2 == 0 ? 1 : -1);
            for (std::size_t w = 0; w < g.level(i).space().dim(q + 1); ++w) {
                put(i, q + 1, w, block.at(w, v) * lsign);
            }
            // Alternating coface sum into the next level.
            if (i + 1 <= g.top_level()) {
                Rational sign(1);
                for (std::size_t k = 0; k <= i + 1; ++k) {
                    Matrix cb = g.coface(k, i + 1).block(q);
                    for (std::size_t w = 0; w < g.level(i + 1).space().dim(q); ++w) {
                        put(i + 1, q, w, cb.at(w, v) * sign);
                    }
                    sign = -sign;
                }
            }
        }
        return out;
    }

};

} // namespace

std::map<int, std::size_t> tot_cohomology_dims(const ScDgla& g) {
    TotSlots T(g);
    std::map<int, std::size_t> out;
    for (const auto& [j, slots] : T.slots) {
        std::size_t h = exactalg::cohomology_dim_at(T.d_matrix(g, j), T.d_matrix(g, j - 1));
        if (h > 0) out[j] = h;
    }
    return out;
}

namespace {

// Ambient coordinates of one total degree of the capped forms totalization:
// the concatenation of the per-level windows.
struct TWAmbient {
    std::vector<LevelCoords> per_level;
    std::vector<std::size_t> offset;
    std::size_t total = 0;

    TWAmbient(const ScDgla& g, unsigned cap, int j) {
        for (std::size_t n = 0; n <= g.top_level(); ++n) {
            per_level.emplace_back(n, cap, g.level(n).space(), j);
            offset.push_back(total);
            total += per_level.back().dim();
        }
    }

    Vec encode(const ScDgla& g, const TWElement& x) const {
        Vec out(total, Rational(0));
        for (std::size_t n = 0; n < per_level.size(); ++n) {
            Vec part = per_level[n].encode(x.levels[n]);
            for (std::size_t i = 0; i < part.size(); ++i) out[offset[n] + i] = part[i];
        }
        return out;
    }

    TWElement decode(const ScDgla& g, unsigned cap, const Vec& v) const {
        TWElement x = tw_zero(g, cap);
        for (std::size_t n = 0; n < per_level.size(); ++n) {
            Vec part(per_level[n].dim(), Rational(0));
            for (std::size_t i = 0; i < part.size(); ++i) part[i] = v[offset[n] + i];
            x.levels[n] = per_level[n].decode(part);
        }
        return x;
    }
};

// Matrix of the face-compatibility constraints at total degree j; the
// kernel is the degree-j piece of the forms totalization.
Matrix tw_constraints(const ScDgla& g, unsigned cap, int j, const TWAmbient& amb) {
    // Rows: for each level n >= 1 and face index k, the coordinates of
    // face_k(x_n) - coface_k(x_{n-1}) in the level-(n-1) window valued in
    // the level-n algebra.
    std::vector<LevelCoords> rows_coords;
    std::vector<std::size_t> row_offset;
    std::size_t total_rows = 0;
    for (std::size_t n = 1; n <= g.top_level(); ++n) {
        rows_coords.emplace_back(n - 1, cap, g.level(n).space(), j);
        row_offset.push_back(total_rows);
        total_rows += (n + 1) * rows_coords.back().dim();
    }
    Matrix out(total_rows, amb.total);
    for (std::size_t col = 0; col < amb.total; ++col) {
        Vec unit(amb.total, Rational(0));
        unit[col] = Rational(1);
        TWElement x = amb.decode(g, cap, unit);
        for (std::size_t n = 1; n <= g.top_level(); ++n) {
            const LevelCoords& rc = rows_coords[n - 1];
            for (std::size_t k = 0; k <= n; ++k) {
                FormElem diff = face_form(static_cast<unsigned>(k), x.levels[n]) -
                                apply_map_form(g.coface(k, n), 1, x.levels[n - 1]);
                Vec coords = rc.encode(diff);
                std::size_t base = row_offset[n - 1] + k * rc.dim();
                for (std::size_t i = 0; i < coords.size(); ++i) {
                    if (!coords[i].is_zero()) out.at(base + i, col) = coords[i];
                }
            }
        }
    }
    return out;
}

} // namespace

std::map<int, std::size_t> tw_cohomology_dims(const ScDgla& g, unsigned cap, int jmin,
                                              int jmax) {
    // Kernels of the face constraints per degree, then the differential in
    // kernel coordinates.
    std::map<int, TWAmbient> ambient;
    std::map<int, Matrix> kernels;
    for (int j = jmin - 1; j <= jmax + 1; ++j) {
        ambient.emplace(j, TWAmbient(g, cap, j));
        kernels.emplace(j, exactalg::kernel_basis(tw_constraints(g, cap, j, ambient.at(j))));
    }
    std::map<int, Matrix> dmat;
    for (int j = jmin - 1; j <= jmax; ++j) {
        const Matrix& K = kernels.at(j);
        Matrix images(ambient.at(j + 1).total, K.cols());
        for (std::size_t c = 0; c < K.cols(); ++c) {
            Vec v(K.rows(), Rational(0));
            for (std::size_t i = 0; i < K.rows(); ++i) v[i] = K.at(i, c);
            TWElement x = ambient.at(j).decode(g, cap, v);
            Vec img = ambient.at(j + 1).encode(g, tw_d(g, 1, x));
            for (std::size_t i = 0; i < img.size(); ++i) images.at(i, c) = img[i];
        }
        auto sol = exactalg::solve_linear_many(kernels.at(j + 1), images);
        if (!sol) {
            throw MathCheckError("differential leaves the face-compatible subcomplex");
        }
        dmat.emplace(j, *sol);
    }
    std::map<int, std::size_t> out;
    for (int j = jmin; j <= jmax; ++j) {
        std::size_t h = kernels.at(j).cols() - exactalg::rank(dmat.at(j)) -
                        exactalg::rank(dmat.at(j - 1));
        if (h > 0) out[j] = h;
    }
    return out;
}

TruncationComparison truncation_criterion(const ScDgla& g) {
    ScDgla trunc = truncate(g, 0, std::min<std::size_t>(2, g.top_level()));
    TotSlots S(g), T(trunc);
    TruncationComparison out;
    for (int j = 0; j <= 2; ++j) {
        Matrix ds_out = S.d_matrix(g, j), ds_in = S.d_matrix(g, j - 1);
        Matrix dt_out = T.d_matrix(trunc, j), dt_in = T.d_matrix(trunc, j - 1);
        Matrix reps_src = exactalg::cohomology_representatives(ds_out, ds_in);
        Matrix reps_tgt = exactalg::cohomology_representatives(dt_out, dt_in);
        // The projection keeps the slots of levels <= 2 (slot labels agree).
        Matrix proj(T.dim(j), S.dim(j));
        if (S.dim(j) > 0 && T.dim(j) > 0) {
            const auto& src_slots = S.slots.at(j);
            const auto& tgt_lookup = T.lookup.at(j);
            for (std::size_t col = 0; col < src_slots.size(); ++col) {
                auto it = tgt_lookup.find(src_slots[col]);
                if (it != tgt_lookup.end()) proj.at(it->second, col) = Rational(1);
            }
        }
        Matrix induced(reps_tgt.cols(), reps_src.cols());
        for (std::size_t c = 0; c < reps_src.cols(); ++c) {
            Vec z(S.dim(j), Rational(0));
            for (std::size_t i = 0; i < reps_src.rows(); ++i) z[i] = reps_src.at(i, c);
            Vec pz = proj.apply(z);
            auto coords = exactalg::cohomology_coordinates(reps_tgt, dt_in, pz);
            if (!coords) throw MathCheckError("projection is not a chain map");
            for (std::size_t i = 0; i < coords->size(); ++i) induced.at(i, c) = (*coords)[i];
        }
        std::size_t rk = exactalg::rank(induced);
        if (j == 0) out.h0_surjective = rk == reps_tgt.cols();
        if (j == 1) {
            out.h1_bijective = reps_src.cols() == reps_tgt.cols() && rk == reps_src.cols();
        }
        if (j == 2) out.h2_injective = rk == reps_src.cols();
    }
    return out;
}

// ------------------------------------------------------- MC decompositions

namespace {

Matrix splitting_part(const std::map<int, Matrix>& part, int deg, std::size_t rows) {
    auto it = part.find(deg);
    if (it == part.end()) return Matrix(rows, 0);
    return it->second;
}

unsigned element_valuation(const ArtinAlgebra& A, const GradedElement& x) {
    const std::size_t r = A.dim();
    unsigned best = A.nilpotency_index();
    for (const auto& [deg, comp] : x.components()) {
        if (comp.size() % r != 0) throw InputError("element_valuation: slot count mismatch");
        for (std::size_t g = 0; g * r < comp.size(); ++g) {
            Vec v(comp.begin() + g * r, comp.begin() + (g + 1) * r);
            best = std::min(best, A.valuation(v));
        }
    }
    return best;
}

GradedElement element_adapted_part(const ArtinAlgebra& A, const GradedElement& x, unsigned k) {
    const std::size_t r = A.dim();
    GradedElement out;
    for (const auto& [deg, comp] : x.components()) {
        Vec target(comp.size(), Rational(0));
        for (std::size_t g = 0; g * r < comp.size(); ++g) {
            Vec v(comp.begin() + g * r, comp.begin() + (g + 1) * r);
            Vec ad = A.to_adapted(v);
            for (std::size_t a = 0; a < r; ++a) {
                if (A.adapted_level(a) != k) ad[a] = Rational(0);
            }
            Vec filtered = A.from_adapted(ad);
            for (std::size_t a = 0; a < r; ++a) target[g * r + a] = filtered[a];
        }
        out.set_component(deg, std::move(target));
    }
    return out;
}

// Coefficient matrix (rows = slots of m_A) of the degree-deg component.
Matrix component_columns(const GradedElement& x, int deg, std::size_t nslots, std::size_t r) {
    Matrix out(nslots, r);
    auto it = x.components().find(deg);
    if (it == x.components().end()) return out;
    if (it->second.size() != nslots * r) {
        throw InputError("component_columns: slot count mismatch");
    }
    for (std::size_t g = 0; g < nslots; ++g) {
        for (std::size_t a = 0; a < r; ++a) out.at(g, a) = it->second[g * r + a];
    }
    return out;
}

GradedElement element_from_columns(int deg, const Matrix& cols, std::size_t r) {
    GradedElement out;
    Vec comp(cols.rows() * r, Rational(0));
    for (std::size_t g = 0; g < cols.rows(); ++g) {
        for (std::size_t a = 0; a < r; ++a) comp[g * r + a] = cols.at(g, a);
    }
    out.set_component(deg, std::move(comp));
    return out;
}

} // namespace

void validate_splitting(const dgla::Dgla& L, const Splitting& S) {
    for (int deg : L.space().degrees()) {
        std::size_t dim = L.space().dim(deg);
        Matrix m = splitting_part(S.sub_m, deg, dim);
        Matrix c = splitting_part(S.sub_c, deg, dim);
        Matrix d = splitting_part(S.sub_d, deg, dim);
        if (m.rows() != dim || c.rows() != dim || d.rows() != dim) {
            throw InputError("splitting: column height does not match the space");
        }
        if (m.cols() + c.cols() + d.cols() != dim) {
            throw MathCheckError("splitting: parts do not add up to the space");
        }
        Matrix all = m.hcat(c).hcat(d);
        if (!exactalg::inverse(all)) {
            throw MathCheckError("splitting: parts are not complementary");
        }
    }
    // The differential must carry the middle part isomorphically onto the
    // third part one degree up.
    for (int deg : L.space().degrees()) {
        Matrix c = splitting_part(S.sub_c, deg, L.space().dim(deg));
        Matrix d_next = splitting_part(S.sub_d, deg + 1, L.space().dim(deg + 1));
        if (c.cols() == 0 && d_next.cols() == 0) continue;
        if (c.cols() != d_next.cols()) {
            throw MathCheckError("splitting: middle and image parts have mismatched sizes");
        }
        Matrix dc = L.d().block(deg) * c;
        auto coords = exactalg::solve_linear_many(d_next, dc);
        if (!coords || !exactalg::inverse(*coords)) {
            throw MathCheckError("splitting: differential is not an isomorphism onto the image part");
        }
    }
    // Any third-part columns in degrees with no middle part below are also a
    // mismatch; the loop above catches them through the size comparison.
    for (const auto& [deg, mat] : S.sub_d) {
        if (mat.cols() > 0) {
            Matrix c = splitting_part(S.sub_c, deg - 1, L.space().dim(deg - 1));
            if (c.cols() != mat.cols()) {
                throw MathCheckError("splitting: image part without matching middle part");
            }
        }
    }
}

Decomposition decompose_mc(const dgla::Dgla& L, const ArtinAlgebra& A, const Splitting& S,
                           const GradedElement& y) {
    validate_splitting(L, S);
    if (!dgla::is_mc(L, A, y)) {
        throw MathCheckError("decompose_mc: input does not satisfy the deformation equation");
    }
    const std::size_t r = A.dim();
    const std::size_t dim1 = L.space().dim(1);
    Matrix m1 = splitting_part(S.sub_m, 1, dim1);
    Matrix c0 = splitting_part(S.sub_c, 0, L.space().dim(0));
    Matrix dc0 = (L.d().block(0) * c0).scaled(Rational(-1));
    Matrix B = m1.hcat(dc0);
    if (exactalg::rank(B) != B.cols()) {
        throw MathCheckError("decompose_mc: correction system is degenerate");
    }

    GradedElement x, c;
    for (unsigned step = 0; step <= A.nilpotency_index() + 1; ++step) {
        GradedElement rho = y - dgla::gauge(L, A, c, x);
        if (rho.is_zero()) {
            if (!dgla::is_mc(L, A, x)) {
                throw MathCheckError("decompose_mc: first factor is not Maurer-Cartan");
            }
            return {x, c};
        }
        unsigned val = element_valuation(A, rho);
        GradedElement rho_k = element_adapted_part(A, rho, val);
        Matrix target = component_columns(rho_k, 1, dim1, r);
        auto sol = exactalg::solve_linear_many(B, target);
        if (!sol) {
            throw MathCheckError("decompose_mc: correction equation is inconsistent");
        }
        Matrix mcoef(m1.cols(), r), ccoef(c0.cols(), r);
        for (std::size_t i = 0; i < m1.cols(); ++i) {
            for (std::size_t a = 0; a < r; ++a) mcoef.at(i, a) = sol->at(i, a);
        }
        for (std::size_t i = 0; i < c0.cols(); ++i) {
            for (std::size_t a = 0; a < r; ++a) ccoef.at(i, a) = sol->at(m1.cols() + i, a);
        }
        x += element_from_columns(1, m1 * mcoef, r);
        c += element_from_columns(0, c0 * ccoef, r);
        GradedElement rho_next = y - dgla::gauge(L, A, c, x);
        if (!rho_next.is_zero() && element_valuation(A, rho_next) <= val) {
            throw MathCheckError("decompose_mc: no progress in the filtration step");
        }
    }
    throw MathCheckError("decompose_mc: iteration failed to terminate");
}

// ------------------------------------------------------------- normal forms

namespace {

// Generic order-by-order elimination at one level of the forms totalization:
// finds (x const in the span of m_basis, c in the span of c_basis) with
// gauge(c, x) = y, both tensored with m_A.
std::pair<FormElem, FormElem> eliminate_level(const dgla::Dgla& L, const ArtinAlgebra& A,
                                              const LevelCoords& coords,
                                              const std::vector<FormElem>& m_basis,
                                              const std::vector<FormElem>& c_basis,
                                              const FormElem& y, const char* what) {
    const std::size_t r = A.dim();
    Matrix B(coords.dim(), 0);
    for (const auto& b : m_basis) B = B.hcat(column_matrix(coords.encode(b)));
    for (const auto& b : c_basis) {
        Vec col = coords.encode(level_d(L, 1, b));
        for (auto& v : col) v = -v;
        B = B.hcat(column_matrix(col));
    }
    if (exactalg::rank(B) != B.cols()) {
        throw MathCheckError(std::string(what) + ": correction system is degenerate");
    }
    FormElem x(y.simplex_dim(), y.cap()), c(y.simplex_dim(), y.cap());
    for (unsigned step = 0; step <= A.nilpotency_index() + 1; ++step) {
        FormElem rho = y - level_gauge(L, A, c, x);
        if (rho.is_zero()) return {x, c};
        unsigned val = form_valuation(A, rho);
        Matrix target = coords.encode_slots(form_adapted_part(A, rho, val), r);
        auto sol = exactalg::solve_linear_many(B, target);
        if (!sol) {
            throw MathCheckError(std::string(what) + ": correction equation is inconsistent");
        }
        Matrix mcoef(m_basis.size(), r), ccoef(c_basis.size(), r);
        for (std::size_t i = 0; i < m_basis.size(); ++i) {
            for (std::size_t a = 0; a < r; ++a) mcoef.at(i, a) = sol->at(i, a);
        }
        for (std::size_t i = 0; i < c_basis.size(); ++i) {
            for (std::size_t a = 0; a < r; ++a) {
                ccoef.at(i, a) = sol->at(m_basis.size() + i, a);
            }
        }
        x += combine_tensored(m_basis, mcoef, r);
        c += combine_tensored(c_basis, ccoef, r);
        FormElem rho_next = y - level_gauge(L, A, c, x);
        if (!rho_next.is_zero() && form_valuation(A, rho_next) <= val) {
            throw MathCheckError(std::string(what) + ": no progress in the filtration step");
        }
    }
    throw MathCheckError(std::string(what) + ": iteration failed to terminate");
}

void check_level_faces_01(const ScDgla& g, const ArtinAlgebra& A, const TWElement& y) {
    const std::size_t r = A.dim();
    if (y.levels.size() < 2) throw InputError("normal form: tuple needs levels 0 and 1");
    for (std::size_t k = 0; k <= 1; ++k) {
        if (!(face_form(static_cast<unsigned>(k), y.levels[1]) ==
              apply_map_form(g.coface(k, 1), r, y.levels[0]))) {
            throw MathCheckError("normal form: tuple is not face-compatible");
        }
    }
    if (!level_mc_defect(g.level(0), A, y.levels[0]).is_zero() ||
        !level_mc_defect(g.level(1), A, y.levels[1]).is_zero()) {
        throw MathCheckError("normal form: tuple does not satisfy the deformation equation");
    }
}

} // namespace

NormalForm01 normal_form_01(const ScDgla& g, const ArtinAlgebra& A, const TWElement& y,
                            unsigned cap) {
    check_level_faces_01(g, A, y);
    const std::size_t r = A.dim();
    const dgla::Dgla& L1 = g.level(1);
    const GradedSpace& V1 = L1.space();
    LevelCoords coords(1, cap, V1, 1);

    std::vector<FormElem> m_basis, c_basis;
    for (std::size_t i = 0; i < V1.dim(1); ++i) {
        m_basis.push_back(constant_form(1, cap, basis_element(V1, 1, i)));
    }
    MPoly u = forms::bary_t(1, 0);  // vanishes at tau = 1
    MPoly upow = u;
    for (unsigned j = 1; j <= cap; ++j) {
        PolyForm w = PolyForm::from_poly(1, cap, upow);
        for (std::size_t i = 0; i < V1.dim(0); ++i) {
            c_basis.push_back(form_tensor(w, basis_element(V1, 0, i)));
        }
        if (j < cap) upow = upow * u;
    }

    auto [m, c] = eliminate_level(L1, A, coords, m_basis, c_basis, y.levels[1],
                                  "interval normal form");

    GradedElement x = point_value(y.levels[0]);
    GradedMap d01 = graded::tensor_map_artin(g.coface(0, 1), A);
    GradedMap d11 = graded::tensor_map_artin(g.coface(1, 1), A);
    if (!(m == constant_form(1, cap, d01.apply(x)))) {
        throw MathCheckError("interval normal form: constant part is not the coface image");
    }
    if (!eval_scalar(c, {Rational(1)}).is_zero()) {
        throw MathCheckError("interval normal form: gauge path does not vanish at the base vertex");
    }
    // Boundary condition at the far vertex: the other coface image is the
    // gauge of the path endpoint.
    GradedElement p_end = eval_scalar(c, {Rational(0)});
    if (!(dgla::gauge(L1, A, p_end, d01.apply(x)) == d11.apply(x))) {
        throw MathCheckError("interval normal form: endpoint face condition fails");
    }
    return {x, c};
}

TWElement assemble_01(const ScDgla& g, const ArtinAlgebra& A, const GradedElement& x,
                      const FormElem& p, unsigned cap) {
    GradedMap d01 = graded::tensor_map_artin(g.coface(0, 1), A);
    TWElement out;
    out.levels.push_back(constant_form(0, cap, x));
    out.levels.push_back(
        level_gauge(g.level(1), A, p, constant_form(1, cap, d01.apply(x))));
    return out;
}

NormalForm02 normal_form_02(const ScDgla& g, const ArtinAlgebra& A, const TWElement& y,
                            unsigned cap) {
    if (g.top_level() < 2 || y.levels.size() < 3) {
        throw InputError("triangle normal form: needs levels 0..2");
    }
    const std::size_t r = A.dim();
    // Levels 0 and 1 first.
    NormalForm01 nf01 = normal_form_01(g, A, y, cap);
    // Remaining face and deformation checks for level 2.
    for (std::size_t k = 0; k <= 2; ++k) {
        if (!(face_form(static_cast<unsigned>(k), y.levels[2]) ==
              apply_map_form(g.coface(k, 2), r, y.levels[1]))) {
            throw MathCheckError("triangle normal form: tuple is not face-compatible");
        }
    }
    if (!level_mc_defect(g.level(2), A, y.levels[2]).is_zero()) {
        throw MathCheckError("triangle normal form: tuple does not satisfy the deformation equation");
    }

    const dgla::Dgla& L2 = g.level(2);
    const GradedSpace& V2 = L2.space();
    LevelCoords coords(2, cap, V2, 1);

    std::vector<FormElem> m_basis, c_basis;
    for (std::size_t i = 0; i < V2.dim(1); ++i) {
        m_basis.push_back(constant_form(2, cap, basis_element(V2, 1, i)));
    }
    // 0-forms vanishing at the last vertex (t1, t2) = (0, 1).
    for (const auto& e : monomials_up_to(2, cap)) {
        if (e[0] == 0 && e[1] == 0) continue;
        MPoly poly = MPoly::monomial(e, Rational(1));
        if (e[0] == 0) poly -= MPoly(2, Rational(1));
        PolyForm w = PolyForm::from_poly(2, cap, poly);
        for (std::size_t i = 0; i < V2.dim(0); ++i) {
            c_basis.push_back(form_tensor(w, basis_element(V2, 0, i)));
        }
    }
    // (1 - t1 - t2) dt1 times monomials, in algebra degree -1.  The factor
    // s0 contributes one polynomial degree and dt1 one form degree, so the
    // monomials stop two short of the cap to stay inside the window.
    if (V2.dim(-1) > 0 && cap >= 2) {
        MPoly s0 = forms::bary_t(2, 0);
        for (const auto& e : monomials_up_to(2, cap - 2)) {
            PolyForm w = PolyForm::term(2, cap, s0 * MPoly::monomial(e, Rational(1)), 0b01);
            for (std::size_t i = 0; i < V2.dim(-1); ++i) {
                c_basis.push_back(form_tensor(w, basis_element(V2, -1, i)));
            }
        }
    }

    auto [m, c] = eliminate_level(L2, A, coords, m_basis, c_basis, y.levels[2],
                                  "triangle normal form");

    // The constant part must be the double coface image of the base point.
    GradedMap d01 = graded::tensor_map_artin(g.coface(0, 1), A);
    GradedMap d02 = graded::tensor_map_artin(g.coface(0, 2), A);
    GradedElement base2 = d02.apply(d01.apply(nf01.x));
    if (!(m == constant_form(2, cap, base2))) {
        throw MathCheckError("triangle normal form: constant part is not the double coface image");
    }

    NormalForm02 out;
    out.x = nf01.x;
    out.p = nf01.p;
    out.q = FormElem(2, cap);
    out.rr = FormElem(2, cap);
    for (const auto& [deg, slots] : c.components()) {
        if (deg == 0) {
            out.q.set_component(0, slots);
        } else if (deg == -1) {
            out.rr.set_component(-1, slots);
        } else {
            throw MathCheckError("triangle normal form: gauge datum in unexpected degree");
        }
    }

    // Edge conditions: the two cofaces of the interval datum match the faces
    // of the triangle datum through the first two faces...
    FormElem p2_0 = apply_map_form(g.coface(0, 2), r, out.p);
    FormElem p2_1 = apply_map_form(g.coface(1, 2), r, out.p);
    if (!(face_form(0, c) == p2_0)) {
        throw MathCheckError("triangle normal form: face-0 edge condition fails");
    }
    if (!(face_form(1, c) == p2_1)) {
        throw MathCheckError("triangle normal form: face-1 edge condition fails");
    }
    // ...and along the remaining edge the combined word stabilizes the
    // constant coface image.
    FormElem p2_2 = apply_map_form(g.coface(2, 2), r, out.p);
    GradedElement q_far = eval_scalar(out.q, {Rational(1), Rational(0)});
    GradedMap d22 = graded::tensor_map_artin(g.coface(2, 2), A);
    GradedElement stab_base = d22.apply(d01.apply(nf01.x));
    FormElem word = level_bch(L2, A, level_bch(L2, A, -p2_2, face_form(2, c)),
                              constant_form(1, cap, q_far).scaled(Rational(-1)));
    FormElem stab_const = constant_form(1, cap, stab_base);
    if (!(level_gauge(L2, A, word, stab_const) == stab_const)) {
        throw MathCheckError("triangle normal form: edge stabilizer condition fails");
    }
    return out;
}

TWElement assemble_02(const ScDgla& g, const ArtinAlgebra& A, const NormalForm02& nf,
                      unsigned cap) {
    TWElement out = assemble_01(g, A, nf.x, nf.p, cap);
    GradedMap d01 = graded::tensor_map_artin(g.coface(0, 1), A);
    GradedMap d02 = graded::tensor_map_artin(g.coface(0, 2), A);
    GradedElement base2 = d02.apply(d01.apply(nf.x));
    out.levels.push_back(
        level_gauge(g.level(2), A, nf.q + nf.rr, constant_form(2, cap, base2)));
    return out;
}

} // namespace defo::tw
