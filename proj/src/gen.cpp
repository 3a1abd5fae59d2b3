#include "defo/gen.hpp"

#include <algorithm>
#include <set>

#include "defo/errors.hpp"

namespace defo::gen {

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw InputError("Rng::index: empty range");
    return static_cast<std::size_t>(raw() % n);
}

long Rng::integer(long lo, long hi) {
    if (hi < lo) throw InputError("Rng::integer: empty range");
    return lo + static_cast<long>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
}

Rational Rng::rational(long max_num, long max_den) {
    long num = integer(-max_num, max_num);
    long den = integer(1, max_den);
    return Rational(num, den);
}

Rational Rng::nonzero_rational(long max_num, long max_den) {
    for (;;) {
        Rational c = rational(max_num, max_den);
        if (!c.is_zero()) return c;
    }
}

dgla::Dgla abelian_dgla(const GradedSpace& space) {
    return dgla::Dgla(space, GradedMap::zero(space, space, 1), {}, dgla::CheckLevel::full);
}

namespace {

// Basis bookkeeping for end_dgla: within End-degree p the basis element
// (q, t, s) is the map sending the s-th basis vector of V^q to the t-th
// basis vector of V^{q+p}.
struct EndBasis {
    const GradedSpace& V;

    std::vector<int> end_degrees() const {
        std::set<int> out;
        for (int q : V.degrees()) {
            for (int qq : V.degrees()) out.insert(qq - q);
        }
        return {out.begin(), out.end()};
    }

    std::size_t dim(int p) const {
        std::size_t n = 0;
        for (int q : V.degrees()) n += V.dim(q) * V.dim(q + p);
        return n;
    }

    std::size_t index(int p, int q, std::size_t t, std::size_t s) const {
        std::size_t off = 0;
        for (int qq : V.degrees()) {
            if (qq == q) break;
            off += V.dim(qq) * V.dim(qq + p);
        }
        return off + t * V.dim(q) + s;
    }

    // Decode basis index i of End-degree p into (q, t, s).
    void decode(int p, std::size_t i, int& q, std::size_t& t, std::size_t& s) const {
        for (int qq : V.degrees()) {
            std::size_t sz = V.dim(qq) * V.dim(qq + p);
            if (i < sz) {
                q = qq;
                t = i / V.dim(qq);
                s = i % V.dim(qq);
                return;
            }
            i -= sz;
        }
        throw InputError("end_dgla: basis index out of range");
    }
};

} // namespace

dgla::Dgla end_dgla(const GradedSpace& V, const GradedMap& dV, dgla::CheckLevel check) {
    if (dV.source() != V || dV.target() != V || dV.shift() != 1) {
        throw InputError("end_dgla: differential must map the complex to itself with shift 1");
    }
    EndBasis eb{V};
    std::map<int, std::size_t> dims;
    for (int p : eb.end_degrees()) {
        std::size_t n = eb.dim(p);
        if (n > 0) dims[p] = n;
    }
    GradedSpace space(dims);

    // Composition e1 ∘ e2 of basis maps, as (degree, index) when nonzero.
    auto compose = [&](int p1, int q1, std::size_t t1, std::size_t s1, int p2, int q2,
                       std::size_t t2, std::size_t s2,
                       std::size_t& out_idx) -> bool {
        if (q1 != q2 + p2 || s1 != t2) return false;
        out_idx = eb.index(p1 + p2, q2, t1, s2);
        return true;
    };

    std::vector<dgla::BracketEntry> entries;
    for (int pa : space.degrees()) {
        for (int pb : space.degrees()) {
            if (space.dim(pa + pb) == 0) continue;
            for (std::size_t ia = 0; ia < space.dim(pa); ++ia) {
                int qa;
                std::size_t ta, sa;
                eb.decode(pa, ia, qa, ta, sa);
                for (std::size_t ib = 0; ib < space.dim(pb); ++ib) {
                    int qb;
                    std::size_t tb, sb;
                    eb.decode(pb, ib, qb, tb, sb);
                    Vec acc(space.dim(pa + pb), Rational(0));
                    std::size_t idx;
                    if (compose(pa, qa, ta, sa, pb, qb, tb, sb, idx)) {
                        acc[idx] += Rational(1);
                    }
                    if (compose(pb, qb, tb, sb, pa, qa, ta, sa, idx)) {
                        Rational sign = (pa * pb) % 2 == 0 ? Rational(-1) : Rational(1);
                        acc[idx] += sign;
                    }
                    for (std::size_t k = 0; k < acc.size(); ++k) {
                        if (!acc[k].is_zero()) {
                            entries.push_back({pa, ia, pb, ib, k, acc[k]});
                        }
                    }
                }
            }
        }
    }

    // d(f) = dV ∘ f - (-1)^{|f|} f ∘ dV.
    std::map<int, Matrix> dblocks;
    for (int p : space.degrees()) {
        if (space.dim(p + 1) == 0) continue;
        Matrix block(space.dim(p + 1), space.dim(p));
        for (std::size_t i = 0; i < space.dim(p); ++i) {
            int q;
            std::size_t t, s;
            eb.decode(p, i, q, t, s);
            Matrix post = dV.block(q + p);  // V^{q+p} -> V^{q+p+1}
            for (std::size_t tt = 0; tt < V.dim(q + p + 1); ++tt) {
                if (post.at(tt, t).is_zero()) continue;
                block.at(eb.index(p + 1, q, tt, s), i) += post.at(tt, t);
            }
            Matrix pre = dV.block(q - 1);  // V^{q-1} -> V^q
            Rational sign(p % 2 == 0 ? -1 : 1);
            for (std::size_t ss = 0; ss < V.dim(q - 1); ++ss) {
                if (pre.at(s, ss).is_zero()) continue;
                block.at(eb.index(p + 1, q - 1, t, ss), i) += pre.at(s, ss) * sign;
            }
        }
        if (!block.is_zero()) dblocks[p] = std::move(block);
    }
    GradedMap d(space, space, 1, std::move(dblocks));
    return dgla::Dgla(space, std::move(d), std::move(entries), check);
}

dgla::Dgla direct_sum(const dgla::Dgla& a, const dgla::Dgla& b, dgla::CheckLevel check) {
    std::map<int, std::size_t> dims;
    std::set<int> degs;
    for (int q : a.space().degrees()) degs.insert(q);
    for (int q : b.space().degrees()) degs.insert(q);
    for (int q : degs) dims[q] = a.space().dim(q) + b.space().dim(q);
    GradedSpace space(dims);

    std::map<int, Matrix> dblocks;
    for (int q : degs) {
        if (space.dim(q + 1) == 0 || space.dim(q) == 0) continue;
        Matrix block(space.dim(q + 1), space.dim(q));
        Matrix da = a.d().block(q), db = b.d().block(q);
        for (std::size_t i = 0; i < da.rows(); ++i) {
            for (std::size_t j = 0; j < da.cols(); ++j) block.at(i, j) = da.at(i, j);
        }
        std::size_t ro = a.space().dim(q + 1), co = a.space().dim(q);
        for (std::size_t i = 0; i < db.rows(); ++i) {
            for (std::size_t j = 0; j < db.cols(); ++j) block.at(ro + i, co + j) = db.at(i, j);
        }
        if (!block.is_zero()) dblocks[q] = std::move(block);
    }

    std::vector<dgla::BracketEntry> entries;
    for (int da : a.space().degrees()) {
        for (int db : a.space().degrees()) {
            for (const auto& e : a.entries(da, db)) {
                entries.push_back({da, e.idx_a, db, e.idx_b, e.idx_out, e.coeff});
            }
        }
    }
    for (int da : b.space().degrees()) {
        for (int db : b.space().degrees()) {
            for (const auto& e : b.entries(da, db)) {
                entries.push_back({da, e.idx_a + a.space().dim(da), db,
                                   e.idx_b + a.space().dim(db),
                                   e.idx_out + a.space().dim(da + db), e.coeff});
            }
        }
    }
    return dgla::Dgla(space, GradedMap(space, space, 1, std::move(dblocks)),
                      std::move(entries), check);
}

namespace {

// Random invertible matrix: unit lower-triangular times unit
// upper-triangular times an invertible diagonal, all with small entries.
Matrix random_invertible(std::size_t n, Rng& rng) {
    Matrix lo = Matrix::identity(n), up = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (rng.index(2) == 0) lo.at(i, j) = rng.rational(2, 2);
            if (rng.index(2) == 0) up.at(j, i) = rng.rational(2, 2);
        }
    }
    Matrix diag(n, n);
    for (std::size_t i = 0; i < n; ++i) diag.at(i, i) = rng.nonzero_rational(2, 2);
    return lo * up * diag;
}

} // namespace

dgla::Dgla random_conjugate(const dgla::Dgla& L, Rng& rng, dgla::CheckLevel check) {
    const GradedSpace& V = L.space();
    std::map<int, Matrix> P, Pinv;
    for (int q : V.degrees()) {
        Matrix p = random_invertible(V.dim(q), rng);
        auto inv = exactalg::inverse(p);
        if (!inv) throw MathCheckError("random_conjugate: generated a singular matrix");
        P[q] = std::move(p);
        Pinv[q] = std::move(*inv);
    }
    auto p_at = [&](int q) {
        auto it = P.find(q);
        return it == P.end() ? Matrix(0, 0) : it->second;
    };
    auto pinv_at = [&](int q) {
        auto it = Pinv.find(q);
        return it == Pinv.end() ? Matrix(0, 0) : it->second;
    };

    // New coordinates x' describe the element P x'; the transported
    // differential is P^{-1} d P and the bracket is transported likewise.
    std::map<int, Matrix> dblocks;
    for (int q : V.degrees()) {
        if (V.dim(q + 1) == 0) continue;
        Matrix block = pinv_at(q + 1) * (L.d().block(q) * p_at(q));
        if (!block.is_zero()) dblocks[q] = std::move(block);
    }

    std::vector<dgla::BracketEntry> entries;
    for (int da : V.degrees()) {
        for (int db : V.degrees()) {
            if (V.dim(da + db) == 0) continue;
            if (L.entries(da, db).empty()) continue;
            const Matrix& pa = P.at(da);
            const Matrix& pb = P.at(db);
            const Matrix& pout = Pinv.at(da + db);
            for (std::size_t ia = 0; ia < V.dim(da); ++ia) {
                for (std::size_t ib = 0; ib < V.dim(db); ++ib) {
                    // [P e_ia, P e_ib] expanded over the old basis.
                    Vec acc(V.dim(da + db), Rational(0));
                    for (std::size_t ka = 0; ka < V.dim(da); ++ka) {
                        if (pa.at(ka, ia).is_zero()) continue;
                        for (std::size_t kb = 0; kb < V.dim(db); ++kb) {
                            if (pb.at(kb, ib).is_zero()) continue;
                            Vec bra = L.bracket_basis(da, ka, db, kb);
                            Rational c = pa.at(ka, ia) * pb.at(kb, ib);
                            for (std::size_t m = 0; m < acc.size(); ++m) {
                                acc[m] += bra[m] * c;
                            }
                        }
                    }
                    Vec out = pout.apply(acc);
                    for (std::size_t m = 0; m < out.size(); ++m) {
                        if (!out[m].is_zero()) {
                            entries.push_back({da, ia, db, ib, m, out[m]});
                        }
                    }
                }
            }
        }
    }
    return dgla::Dgla(V, GradedMap(V, V, 1, std::move(dblocks)), std::move(entries), check);
}

std::pair<GradedSpace, GradedMap> random_complex(Rng& rng, int deg_min, int deg_max,
                                                 const std::vector<std::size_t>& h_dims,
                                                 const std::vector<std::size_t>& acyclic_pairs) {
    const std::size_t span = static_cast<std::size_t>(deg_max - deg_min + 1);
    if (h_dims.size() != span || (span > 0 && acyclic_pairs.size() != span - 1)) {
        throw InputError("random_complex: dimension lists do not match the degree range");
    }
    std::map<int, std::size_t> dims;
    for (int q = deg_min; q <= deg_max; ++q) {
        std::size_t idx = static_cast<std::size_t>(q - deg_min);
        std::size_t n = h_dims[idx];
        if (q < deg_max) n += acyclic_pairs[idx];          // sources of pairs (q, q+1)
        if (q > deg_min) n += acyclic_pairs[idx - 1];      // targets of pairs (q-1, q)
        if (n > 0) dims[q] = n;
    }
    GradedSpace space(dims);

    // Basis layout per degree: h generators, then pair sources, then pair
    // targets.
    std::map<int, Matrix> dblocks;
    for (int q = deg_min; q < deg_max; ++q) {
        std::size_t idx = static_cast<std::size_t>(q - deg_min);
        if (acyclic_pairs[idx] == 0 || space.dim(q) == 0 || space.dim(q + 1) == 0) continue;
        Matrix block(space.dim(q + 1), space.dim(q));
        std::size_t src_off = h_dims[idx];
        std::size_t tgt_off = h_dims[idx + 1] + (q + 1 < deg_max ? acyclic_pairs[idx + 1] : 0);
        for (std::size_t k = 0; k < acyclic_pairs[idx]; ++k) {
            block.at(tgt_off + k, src_off + k) = rng.nonzero_rational(2, 2);
        }
        dblocks[q] = std::move(block);
    }
    GradedMap d(space, space, 1, std::move(dblocks));

    // Mix the basis in every degree.
    std::map<int, Matrix> P, Pinv;
    for (int q : space.degrees()) {
        Matrix p = random_invertible(space.dim(q), rng);
        auto inv = exactalg::inverse(p);
        if (!inv) throw MathCheckError("random_complex: generated a singular matrix");
        P[q] = std::move(p);
        Pinv[q] = std::move(*inv);
    }
    std::map<int, Matrix> mixed;
    for (int q : space.degrees()) {
        if (space.dim(q + 1) == 0) continue;
        Matrix block = Pinv.at(q + 1) * (d.block(q) * P.at(q));
        if (!block.is_zero()) mixed[q] = std::move(block);
    }
    return {space, GradedMap(space, space, 1, std::move(mixed))};
}

dgla::Dgla random_dgla(Rng& rng, dgla::CheckLevel check) {
    const std::size_t shape = rng.index(3);
    if (shape == 0) {
        // Endomorphisms of a two-degree complex.
        auto [V, dV] = random_complex(rng, 0, 1,
                                      {1 + rng.index(2), rng.index(2)},
                                      {1});
        return end_dgla(V, dV, check);
    }
    if (shape == 1) {
        // Endomorphisms of a three-degree complex, mixed basis.
        auto [V, dV] = random_complex(rng, 0, 2,
                                      {1, rng.index(2), rng.index(2)},
                                      {1, rng.index(2)});
        return end_dgla(V, dV, check);
    }
    // Endomorphism algebra summed with a random abelian part, then
    // conjugated.
    auto [V, dV] = random_complex(rng, 0, 1, {1, rng.index(2)}, {1});
    dgla::Dgla core = end_dgla(V, dV, dgla::CheckLevel::none);
    std::map<int, std::size_t> abdims;
    for (int q = -1; q <= 2; ++q) {
        std::size_t n = rng.index(2);
        if (n > 0) abdims[q] = n;
    }
    if (abdims.empty()) abdims[1] = 1;
    dgla::Dgla summed = direct_sum(core, abelian_dgla(GradedSpace(abdims)),
                                   dgla::CheckLevel::none);
    return random_conjugate(summed, rng, check);
}

Vec random_m_vec(const ArtinAlgebra& A, Rng& rng) {
    Vec v(A.dim(), Rational(0));
    for (auto& c : v) c = rng.rational(2, 2);
    return v;
}

GradedElement random_tensored(const GradedSpace& V, int degree, const ArtinAlgebra& A,
                              Rng& rng) {
    GradedElement out;
    const std::size_t n = V.dim(degree);
    if (n == 0) return out;
    Vec comp(n * A.dim(), Rational(0));
    for (auto& c : comp) c = rng.rational(2, 2);
    out.set_component(degree, std::move(comp));
    return out;
}

GradedElement random_mc(const dgla::Dgla& L, const ArtinAlgebra& A, Rng& rng) {
    GradedElement a = random_tensored(L.space(), 0, A, rng);
    GradedElement y = dgla::gauge(L, A, a, GradedElement());
    if (!dgla::is_mc(L, A, y)) {
        throw MathCheckError("random_mc: gauge of zero failed the deformation equation");
    }
    return y;
}

} // namespace defo::gen
