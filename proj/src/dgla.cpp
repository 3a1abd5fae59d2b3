#include "defo/dgla.hpp"

#include <algorithm>
#include <random>

namespace defo::dgla {

using exactalg::cohomology_coordinates;
using exactalg::cohomology_representatives;
using exactalg::solve_linear;

namespace {

Rational koszul_sign(int da, int db) {
    return (da % 2 != 0 && db % 2 != 0) ? Rational(1) : Rational(-1);
    // [b,a] = -(-1)^{da db}[a,b]: the returned factor is -(-1)^{da db}.
}

} // namespace

Dgla::Dgla(GradedSpace space, GradedMap d, std::vector<BracketEntry> bracket,
           CheckLevel level, std::uint64_t seed)
    : space_(std::move(space)), d_(std::move(d)) {
    if (!(d_.source() == space_) || !(d_.target() == space_) || d_.shift() != 1)
        throw InputError("Dgla: differential must be a shift-1 endomap of the space");
    if (!d_.compose(d_).is_zero())
        throw NotADifferential("Dgla: differential does not square to zero");

    // Ingest entries, then complete antisymmetrically: the mirror of
    // (a, b) |-> c e_out is (b, a) |-> -(-1)^{|a||b|} c e_out.  When both
    // orientations are supplied they must agree.
    auto add = [&](int da, std::size_t ia, int db, std::size_t ib, std::size_t io,
                   const Rational& c) {
        if (ia >= space_.dim(da) || ib >= space_.dim(db) || io >= space_.dim(da + db))
            throw InputError("Dgla: bracket entry index out of range");
        auto& list = table_[{da, db}];
        for (auto& e : list)
            if (e.idx_a == ia && e.idx_b == ib && e.idx_out == io) {
                e.coeff += c;
                return;
            }
        list.push_back(Entry{ia, ib, io, c});
    };
    for (const auto& e : bracket) add(e.deg_a, e.idx_a, e.deg_b, e.idx_b, e.idx_out, e.coeff);
    // Drop zero entries produced by duplicate accumulation.
    for (auto& [key, list] : table_)
        list.erase(std::remove_if(list.begin(), list.end(),
                                  [](const Entry& e) { return e.coeff.is_zero(); }),
                   list.end());

    // Antisymmetric completion and consistency.
    auto materialize = [&](int da, int db) {
        std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> m;
        auto it = table_.find({da, db});
        if (it != table_.end())
            for (const auto& e : it->second) m[{e.idx_a, e.idx_b, e.idx_out}] = e.coeff;
        return m;
    };
    std::vector<std::pair<int, int>> keys;
    for (const auto& [key, list] : table_) keys.push_back(key);
    for (const auto& [da, db] : keys) {
        auto fwd = materialize(da, db);
        auto bwd = materialize(db, da);
        Rational s = koszul_sign(da, db);
        for (const auto& [idx, c] : fwd) {
            auto [ia, ib, io] = idx;
            auto mirror = bwd.find({ib, ia, io});
            if (mirror == bwd.end()) {
                add(db, ib, da, ia, io, c * s);
            } else if (mirror->second != c * s) {
                throw MathCheckError("Dgla: bracket table violates graded antisymmetry");
            }
        }
    }
    // Diagonal constraint in even degrees: [v, v] = -[v, v] forces zero; the
    // completion above cannot see it because the mirror of (v,v) is itself.
    for (const auto& [key, list] : table_) {
        if (key.first != key.second || key.first % 2 != 0) continue;
        for (const auto& e : list)
            if (e.idx_a == e.idx_b && !e.coeff.is_zero())
                throw MathCheckError("Dgla: nonzero [v,v] for v of even degree");
    }

    check_axioms(level, seed);
}

const std::vector<Dgla::Entry>& Dgla::entries(int da, int db) const {
    static const std::vector<Entry> empty;
    auto it = table_.find({da, db});
    return it == table_.end() ? empty : it->second;
}

Vec Dgla::bracket_basis(int da, std::size_t ia, int db, std::size_t ib) const {
    Vec out(space_.dim(da + db), Rational(0));
    for (const auto& e : entries(da, db))
        if (e.idx_a == ia && e.idx_b == ib) out[e.idx_out] += e.coeff;
    return out;
}

void Dgla::check_axioms(CheckLevel level, std::uint64_t seed) const {
    if (level == CheckLevel::none) return;

    struct BasisIndex {
        int deg;
        std::size_t idx;
    };
    std::vector<BasisIndex> basis;
    for (int deg : space_.degrees())
        for (std::size_t i = 0; i < space_.dim(deg); ++i) basis.push_back({deg, i});
    const std::size_t n = basis.size();
    if (n == 0) return;

    auto elem = [&](const BasisIndex& b) {
        GradedElement v;
        Vec comp(space_.dim(b.deg), Rational(0));
        comp[b.idx] = Rational(1);
        v.set_component(b.deg, comp);
        return v;
    };

    // Leibniz on all basis pairs (quadratic, always affordable).
    for (const auto& a : basis)
        for (const auto& b : basis) {
            GradedElement ea = elem(a), eb = elem(b);
            GradedElement lhs = d_.apply(bracket(ea, eb));
            GradedElement rhs = bracket(d_.apply(ea), eb);
            GradedElement mixed = bracket(ea, d_.apply(eb));
            rhs += (a.deg % 2 == 0) ? mixed : mixed.scaled_by(Rational(-1));
            if (lhs != rhs)
                throw MathCheckError("Dgla: Leibniz rule fails on a basis pair");
        }

    // Jacobi on basis triples: full sweep or a seeded random sample.
    auto jacobi = [&](const BasisIndex& a, const BasisIndex& b, const BasisIndex& c) {
        GradedElement ea = elem(a), eb = elem(b), ec = elem(c);
        GradedElement lhs = bracket(ea, bracket(eb, ec));
        GradedElement rhs = bracket(bracket(ea, eb), ec);
        GradedElement mixed = bracket(eb, bracket(ea, ec));
        rhs += (a.deg * b.deg % 2 == 0) ? mixed : mixed.scaled_by(Rational(-1));
        if (lhs != rhs)
            throw MathCheckError("Dgla: Jacobi identity fails on a basis triple");
    };
    if (level == CheckLevel::full) {
        for (const auto& a : basis)
            for (const auto& b : basis)
                for (const auto& c : basis) jacobi(a, b, c);
    } else {
        std::mt19937_64 rng(seed);
        const std::size_t samples = std::min<std::size_t>(n * n * n, 200);
        for (std::size_t s = 0; s < samples; ++s)
            jacobi(basis[rng() % n], basis[rng() % n], basis[rng() % n]);
    }
}

bool is_mc(const Dgla& L, const ArtinAlgebra& A, const GradedElement& x) {
    return mc_defect(L, A, x).is_zero();
}

bool gauge_group_law_check(const Dgla& L, const ArtinAlgebra& A, const GradedElement& a,
                           const GradedElement& b, const GradedElement& x) {
    return gauge(L, A, bch(L, A, a, b), x) == gauge(L, A, a, gauge(L, A, b, x));
}

GradedMap twisted_differential_map(const Dgla& L, const ArtinAlgebra& A,
                                   const GradedElement& x) {
    GradedSpace tensored = graded::tensor_artin(L.space(), A);
    const std::size_t r = A.dim();
    std::map<int, Matrix> blocks;
    for (int deg : tensored.degrees()) {
        const std::size_t cols = tensored.dim(deg);
        const std::size_t rows = tensored.dim(deg + 1);
        if (rows == 0) continue;
        Matrix m(rows, cols);
        for (std::size_t j = 0; j < cols; ++j) {
            GradedElement e;
            Vec comp(cols, Rational(0));
            comp[j] = Rational(1);
            e.set_component(deg, comp);
            GradedElement im = differential(L, A, e) + bracket(L, A, x, e);
            Vec icomp = im.component(deg + 1, rows);
            for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = icomp[i];
        }
        blocks.emplace(deg, std::move(m));
    }
    return GradedMap(tensored, tensored, 1, std::move(blocks));
}

TwistedDgla twisted(const Dgla& L, const ArtinAlgebra& A, const GradedElement& x) {
    if (!is_mc(L, A, x)) throw MathCheckError("twisted: element does not satisfy MC");
    GradedMap dx = twisted_differential_map(L, A, x);
    if (!dx.compose(dx).is_zero())
        throw MathCheckError("twisted: twisted differential does not square to zero");
    return TwistedDgla{L, A, x, std::move(dx)};
}

std::optional<GradedElement> irrelevant_stabilizer_membership(const Dgla& L,
                                                              const ArtinAlgebra& A,
                                                              const GradedElement& x,
                                                              const GradedElement& u) {
    detail::require_homogeneous(u, 0, "irrelevant_stabilizer_membership");
    if (!is_mc(L, A, x))
        throw MathCheckError("irrelevant_stabilizer_membership: x does not satisfy MC");
    const std::size_t r = A.dim();
    const std::size_t n_h = L.space().dim(-1) * r;
    const std::size_t n_u = L.space().dim(0) * r;
    Vec target = u.component(0, n_u);
    GradedMap dx = twisted_differential_map(L, A, x);
    Matrix m = dx.block(-1);  // (L^{-1} (x) m_A) -> (L^0 (x) m_A)
    if (n_h == 0) {
        for (const auto& c : target)
            if (!c.is_zero()) return std::nullopt;
        return GradedElement{};
    }
    auto h = solve_linear(m, target);
    if (!h) return std::nullopt;
    GradedElement out;
    out.set_component(-1, *h);
    return out;
}

ObstructionResult obstruction_class(const Dgla& L, const SmallExtension& ext,
                                    const GradedElement& x,
                                    const std::optional<GradedElement>& lift_perturbation) {
    const ArtinAlgebra& A = ext.base();
    const ArtinAlgebra& B = ext.total();
    const std::size_t ra = A.dim(), rb = B.dim();
    if (!is_mc(L, A, x)) throw MathCheckError("obstruction_class: x does not satisfy MC");

    // Set-theoretic degree-1 lift through the section, index by index on the
    // L side.
    const std::size_t n1 = L.space().dim(1);
    Vec xa = x.component(1, n1 * ra);
    Vec xb(n1 * rb, Rational(0));
    for (std::size_t v = 0; v < n1; ++v) {
        Vec slice(ra);
        for (std::size_t e = 0; e < ra; ++e) slice[e] = xa[v * ra + e];
        Vec lifted = ext.lift(slice);
        for (std::size_t e = 0; e < rb; ++e) xb[v * rb + e] = lifted[e];
    }
    GradedElement xt;
    xt.set_component(1, xb);
    if (lift_perturbation) {
        detail::require_homogeneous(*lift_perturbation, 1, "obstruction_class perturbation");
        Vec p = lift_perturbation->component(1, n1 * rb);
        for (std::size_t v = 0; v < n1; ++v) {
            Vec slice(rb);
            for (std::size_t e = 0; e < rb; ++e) slice[e] = p[v * rb + e];
            if (!ext.kernel_coordinates(slice))
                throw InputError("obstruction_class: perturbation is not kernel-valued");
        }
        xt += *lift_perturbation;
    }

    // Defect lives in L^2 (x) J.
    GradedElement defect = mc_defect(L, B, xt);
    const std::size_t n2 = L.space().dim(2);
    const std::size_t nj = ext.kernel_basis().size();
    Vec dvec = defect.component(2, n2 * rb);
    Matrix defect_in_j(n2, nj);  // row: L^2 index, column: kernel coordinate
    for (std::size_t w = 0; w < n2; ++w) {
        Vec slice(rb);
        for (std::size_t e = 0; e < rb; ++e) slice[e] = dvec[w * rb + e];
        auto jc = ext.kernel_coordinates(slice);
        if (!jc)
            throw MathCheckError("obstruction_class: defect is not kernel-valued");
        for (std::size_t t = 0; t < nj; ++t) defect_in_j.at(w, t) = (*jc)[t];
    }

    // Class in H^2(L) (x) J; each kernel coordinate of the defect must be a
    // cocycle of L.
    Matrix d1 = L.d().block(1);  // L^1 -> L^2
    Matrix d2 = L.d().block(2);  // L^2 -> L^3
    Matrix reps = cohomology_representatives(d2, d1);
    ObstructionResult res;
    res.class_in_h2 = Matrix(reps.cols(), nj);
    for (std::size_t t = 0; t < nj; ++t) {
        Vec col(n2);
        for (std::size_t w = 0; w < n2; ++w) col[w] = defect_in_j.at(w, t);
        Vec dcol = d2.apply(col);
        if (!std::all_of(dcol.begin(), dcol.end(), [](const Rational& c) { return c.is_zero(); }))
            throw MathCheckError("obstruction_class: defect coordinate is not a cocycle");
        auto coords = cohomology_coordinates(reps, d1, col);
        if (!coords)
            throw MathCheckError("obstruction_class: cocycle has no cohomology coordinates");
        for (std::size_t h = 0; h < reps.cols(); ++h) res.class_in_h2.at(h, t) = (*coords)[h];
    }

    res.lifts = res.class_in_h2.is_zero();
    if (res.lifts) {
        // Correct the lift: the kernel is square-zero and killed by m_B, so
        // the defect shifts by exactly d y for a kernel-valued degree-1 y.
        GradedElement y;
        Vec ycomp(n1 * rb, Rational(0));
        for (std::size_t t = 0; t < nj; ++t) {
            Vec col(n2);
            for (std::size_t w = 0; w < n2; ++w) col[w] = -defect_in_j.at(w, t);
            auto sol = solve_linear(d1, col);
            if (!sol)
                throw MathCheckError("obstruction_class: vanishing class but unsolvable correction");
            for (std::size_t v = 0; v < n1; ++v)
                for (std::size_t e = 0; e < rb; ++e)
                    ycomp[v * rb + e] += (*sol)[v] * ext.kernel_basis()[t][e];
        }
        y.set_component(1, ycomp);
        GradedElement corrected = xt + y;
        if (!is_mc(L, B, corrected))
            throw MathCheckError("obstruction_class: corrected lift fails MC");
        res.lift = corrected;
    }
    return res;
}

GaugeEquivResult gauge_equiv_decide(const Dgla& L, const ArtinAlgebra& A,
                                    const GradedElement& x0, const GradedElement& x1,
                                    const exactalg::GroebnerOptions& opt) {
    if (!is_mc(L, A, x0) || !is_mc(L, A, x1))
        throw MathCheckError("gauge_equiv_decide: inputs must satisfy MC");
    const std::size_t r = A.dim();
    const std::size_t n0 = L.space().dim(0) * r;
    GaugeEquivResult res;
    if (n0 == 0) {
        res.equivalent = (x0 == x1);
        if (res.equivalent) res.witness = GradedElement{};
        return res;
    }

    // Symbolic unknown a with one variable per coordinate of L^0 (x) m_A.
    GElemT<MPoly> a_sym;
    {
        std::vector<MPoly> comp;
        for (std::size_t i = 0; i < n0; ++i) comp.push_back(MPoly::variable(n0, i));
        a_sym.set_component(0, std::move(comp));
    }
    auto embed = [&](const GradedElement& v) {
        GElemT<MPoly> out;
        for (const auto& [deg, comp] : v.components()) {
            std::vector<MPoly> c;
            for (const auto& q : comp) c.push_back(MPoly(n0, q));
            out.set_component(deg, std::move(c));
        }
        return out;
    };
    GElemT<MPoly> residual = gauge(L, A, a_sym, embed(x0)) - embed(x1);
    std::vector<MPoly> gens;
    for (const auto& [deg, comp] : residual.components())
        for (const auto& p : comp)
            if (!p.is_zero()) gens.push_back(p);
    exactalg::PolyIdeal ideal{n0, gens};
    res.equivalent = exactalg::ideal_has_solution(ideal, opt);
    if (!res.equivalent) return res;

    auto gb = exactalg::groebner(ideal, opt);
    if (gens.empty() || exactalg::is_zero_dimensional(gb, n0, opt.order)) {
        auto pt = gens.empty() ? std::optional<std::vector<Rational>>(std::vector<Rational>(n0, Rational(0)))
                               : exactalg::rational_point(ideal, opt);
        if (pt) {
            GradedElement a;
            a.set_component(0, *pt);
            if (gauge(L, A, a, x0) != x1)
                throw MathCheckError("gauge_equiv_decide: extracted witness fails to act");
            res.witness = a;
        }
    }
    return res;
}

graded::Cohomology tangent_space(const Dgla& L) {
    Matrix d_out = L.d().block(1);
    Matrix d_in = L.d().block(0);
    graded::Cohomology h;
    h.representatives = cohomology_representatives(d_out, d_in);
    h.dim = h.representatives.cols();
    return h;
}

} // namespace defo::dgla
