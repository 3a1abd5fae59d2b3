#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "defo/gen.hpp"
#include "defo/tw.hpp"

using namespace defo::tw;
using defo::InputError;
using defo::MathCheckError;
using defo::artin::make_dual_numbers;
using defo::dgla::CheckLevel;
using defo::dgla::Dgla;
using defo::forms::whitney_form;
namespace gen = defo::gen;
namespace dgla = defo::dgla;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

Matrix mat(std::size_t r, std::size_t c, std::vector<int> vals) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Rational(vals[i * c + j]);
    return m;
}

GradedElement elem(int deg, Vec coeffs) {
    GradedElement v;
    v.set_component(deg, std::move(coeffs));
    return v;
}

GradedElement basis_elt(const GradedSpace& V, int deg, std::size_t idx) {
    Vec v(V.dim(deg), Rational(0));
    v[idx] = Rational(1);
    return elem(deg, std::move(v));
}

// Endomorphisms of the two-term identity complex: degrees -1 (h), 0 (a, b),
// 1 (e) with d h = a + b, d a = e, d b = -e and the commutator bracket.
// The structure is hand-verified in the generator tests.
Dgla end2(CheckLevel check = CheckLevel::none) {
    GradedSpace V({{0, 1}, {1, 1}});
    GradedMap dV(V, V, 1, {{0, mat(1, 1, {1})}});
    return gen::end_dgla(V, dV, check);
}

// Abelian with one generator in each of the degrees -1, 0, 1.
Dgla abmix() { return gen::abelian_dgla(GradedSpace({{-1, 1}, {0, 1}, {1, 1}})); }

Dgla triple_alg(const Dgla& L) {
    return gen::direct_sum(gen::direct_sum(L, L, CheckLevel::none), L, CheckLevel::none);
}

// Map between finite products of copies of L: row block b of the target
// receives the sel[b]-th copy of the source, identically.
GradedMap select_map(const GradedSpace& VL, std::size_t src_copies,
                     const std::vector<std::size_t>& sel) {
    std::map<int, std::size_t> sdims, tdims;
    std::map<int, Matrix> blocks;
    for (int q : VL.degrees()) {
        std::size_t d = VL.dim(q);
        sdims[q] = src_copies * d;
        tdims[q] = sel.size() * d;
        Matrix m(sel.size() * d, src_copies * d);
        for (std::size_t b = 0; b < sel.size(); ++b)
            for (std::size_t i = 0; i < d; ++i) m.at(b * d + i, sel[b] * d + i) = Rational(1);
        blocks[q] = std::move(m);
    }
    return GradedMap(GradedSpace(sdims), GradedSpace(tdims), 0, std::move(blocks));
}

// Nerve of a three-set cover: level 0 products over the sets, level 1 over
// the pairs (01), (02), (12), level 2 the single triple; cofaces drop the
// corresponding index.
ScDgla cech3(const Dgla& L) {
    const GradedSpace& VL = L.space();
    std::vector<Dgla> levels = {triple_alg(L), triple_alg(L), L};
    std::vector<std::vector<GradedMap>> cofaces = {
        {select_map(VL, 3, {1, 2, 2}), select_map(VL, 3, {0, 0, 1})},
        {select_map(VL, 3, {2}), select_map(VL, 3, {1}), select_map(VL, 3, {0})},
    };
    return ScDgla(std::move(levels), std::move(cofaces));
}

// All levels equal to L, all cofaces the identity.
ScDgla constant_sc(const Dgla& L, std::size_t M) {
    std::vector<Dgla> levels(M + 1, L);
    std::vector<std::vector<GradedMap>> cofaces;
    for (std::size_t i = 1; i <= M; ++i)
        cofaces.emplace_back(i + 1, GradedMap::identity(L.space()));
    return ScDgla(std::move(levels), std::move(cofaces));
}

// Constant levels 0..2 over L, then one extra level K reached by zero
// cofaces.
ScDgla constant_plus_isolated(const Dgla& L, const Dgla& K) {
    std::vector<Dgla> levels = {L, L, L, K};
    GradedMap id = GradedMap::identity(L.space());
    GradedMap z = GradedMap::zero(L.space(), K.space(), 0);
    std::vector<std::vector<GradedMap>> cofaces = {{id, id}, {id, id, id}, {z, z, z, z}};
    return ScDgla(std::move(levels), std::move(cofaces));
}

TotElement tot_basis(const ScDgla& g, int j, std::size_t level, std::size_t idx) {
    TotElement y = tot_zero(g, j);
    y.levels[level] = basis_elt(g.level(level).space(), j - static_cast<int>(level), idx);
    return y;
}

TotElement random_tot(const ScDgla& g, int j, gen::Rng& rng) {
    TotElement y = tot_zero(g, j);
    for (std::size_t i = 0; i <= g.top_level(); ++i) {
        const GradedSpace& V = g.level(i).space();
        int q = j - static_cast<int>(i);
        if (V.dim(q) == 0) continue;
        Vec v(V.dim(q), Rational(0));
        for (auto& c : v) c = rng.rational(2, 2);
        y.levels[i] = elem(q, std::move(v));
    }
    return y;
}

// Tensor a plain (r = 1) form element into the r-slot convention, scaling
// by the coefficient vector mu over the Artinian basis.
FormElem promote_form(const FormElem& x, const Vec& mu) {
    FormElem out(x.simplex_dim(), x.cap());
    for (const auto& [deg, slots] : x.components()) {
        std::vector<PolyForm> t(slots.size() * mu.size(),
                                PolyForm(x.simplex_dim(), x.cap()));
        for (std::size_t i = 0; i < slots.size(); ++i)
            for (std::size_t e = 0; e < mu.size(); ++e)
                t[i * mu.size() + e] = slots[i].scaled(mu[e]);
        out.set_component(deg, std::move(t));
    }
    return out;
}

TWElement promote_tw(const TWElement& x, const Vec& mu) {
    TWElement out;
    for (const auto& f : x.levels) out.levels.push_back(promote_form(f, mu));
    return out;
}

TWElement scaled_tw(const TWElement& x, const Rational& c) {
    TWElement out;
    for (const auto& f : x.levels) out.levels.push_back(f.scaled(c));
    return out;
}

// Random face-compatible tensored tuple of the given total degree, as a sum
// of promoted extensions.
TWElement random_compatible(const ScDgla& g, const ArtinAlgebra& A, unsigned cap, int j,
                            gen::Rng& rng) {
    TWElement out = promote_tw(whitney_map(g, cap, random_tot(g, j, rng)),
                               gen::random_m_vec(A, rng));
    out = out + promote_tw(whitney_map(g, cap, random_tot(g, j, rng)),
                           gen::random_m_vec(A, rng));
    return out;
}

bool levels01_equal(const TWElement& a, const TWElement& b) {
    return a.levels[0] == b.levels[0] && a.levels[1] == b.levels[1];
}

} // namespace

// --------------------------------------------------------------- FormElem

TEST_CASE("form elements: arithmetic, tensoring, evaluation") {
    GradedSpace V({{-1, 1}, {0, 1}, {1, 1}});
    GradedElement v = elem(0, {R(2)}) + elem(1, {R(3)});

    FormElem c = constant_form(0, 2, v);
    CHECK(point_value(c) == v);
    CHECK(c.simplex_dim() == 0);

    // Tensor with the interval coordinate and evaluate at the endpoints.
    MPoly t = MPoly::variable(1, 0);
    FormElem x = form_tensor(PolyForm::from_poly(1, 3, t), v);
    CHECK(eval_scalar(x, {R(0)}).is_zero());
    CHECK(eval_scalar(x, {R(1)}) == v);
    auto [at0, at1] = path_endpoints(x);
    CHECK(at0.is_zero());
    CHECK(at1 == v);

    // dt-parts make scalar evaluation meaningless.
    FormElem y = form_tensor(PolyForm::term(1, 3, MPoly(1, R(1)), 1u), elem(0, {R(1)}));
    CHECK_THROWS_AS(eval_scalar(y, {R(0)}), InputError);

    // Linear structure.
    CHECK((x + y) - y == x);
    CHECK(x.scaled(R(2)) - x == x);
    CHECK((x - x).is_zero());
    CHECK(x.form_scaled(PolyForm::scalar(1, 3, R(3))) == x.scaled(R(3)));
    CHECK(x != y);

    // Component access pads with zero forms; nonzero entries must live on
    // the right simplex.
    CHECK(x.component(5, 4).size() == 4);
    FormElem bad(1, 3);
    CHECK_THROWS_AS(
        bad.set_component(0, std::vector<PolyForm>{PolyForm::scalar(2, 3, R(1))}),
        InputError);

    FormElem acc(1, 3);
    acc.add_to_slot(0, 1, 0, PolyForm::from_poly(1, 3, t));
    acc.add_to_slot(1, 1, 0, PolyForm::from_poly(1, 3, t));
    acc.add_to_slot(1, 1, 0, PolyForm::from_poly(1, 3, -t));
    CHECK(acc == form_tensor(PolyForm::from_poly(1, 3, t), elem(0, {R(1)})));
}

TEST_CASE("level coordinates encode and decode") {
    GradedSpace V({{-1, 1}, {0, 1}, {1, 1}});
    LevelCoords coords(1, 2, V, 0);
    // Total degree 0 on the interval with combined degree at most 2:
    // degree-0 slots carry 0-forms (monomials 1, t, t^2), degree -1 slots
    // carry dt-forms whose coefficients leave room for the dt (1, t).
    CHECK(coords.dim() == 5);
    CHECK(coords.simplex_dim() == 1);
    CHECK(coords.total_degree() == 0);

    for (std::size_t i = 0; i < coords.dim(); ++i) {
        Vec unit(coords.dim(), Rational(0));
        unit[i] = Rational(1);
        CHECK(coords.encode(coords.decode(unit)) == unit);
    }

    MPoly t = MPoly::variable(1, 0);
    FormElem x = form_tensor(PolyForm::from_poly(1, 2, MPoly(1, R(2)) - t), elem(0, {R(1)}));
    x += form_tensor(PolyForm::term(1, 2, t, 1u), elem(-1, {R(5)}));
    CHECK(coords.decode(coords.encode(x)) == x);

    // Terms outside the requested total degree are rejected, and so are
    // dt-coefficients too large for the combined-degree window.
    FormElem off = form_tensor(PolyForm::from_poly(1, 2, t), elem(1, {R(1)}));
    CHECK_THROWS_AS(coords.encode(off), InputError);
    FormElem heavy = form_tensor(PolyForm::term(1, 2, t * t, 1u), elem(-1, {R(1)}));
    CHECK_THROWS_AS(coords.encode(heavy), InputError);
    CHECK_THROWS_AS(coords.decode(Vec(2, Rational(0))), InputError);

    // The encoding respects the Artinian slot convention columnwise.
    auto A = make_dual_numbers(3);
    FormElem prom = promote_form(x, {R(1), R(-2)});
    Matrix cols = coords.encode_slots(prom, A.dim());
    CHECK(cols.cols() == 2);
    for (std::size_t i = 0; i < coords.dim(); ++i) {
        CHECK(cols.at(i, 0) == coords.encode(x)[i]);
        CHECK(cols.at(i, 1) == coords.encode(x)[i] * R(-2));
    }
}

// ----------------------------------------------------------------- ScDgla

TEST_CASE("semicosimplicial construction validates its data") {
    ScDgla g = cech3(end2());
    CHECK(g.top_level() == 2);
    CHECK(g.level(0).space().total_dim() == 12);
    CHECK(g.level(2).space().total_dim() == 4);
    CHECK(g.coface(0, 1).source() == g.level(0).space());
    CHECK_THROWS_AS(g.level(3), InputError);
    CHECK_THROWS_AS(g.coface(2, 1), InputError);
    CHECK_THROWS_AS(g.coface(0, 0), InputError);

    // Family sizes must match the level count.
    CHECK_THROWS_AS(ScDgla({end2(), end2()}, {}), InputError);
    GradedMap id2 = GradedMap::identity(end2().space());
    CHECK_THROWS_AS(ScDgla({end2(), end2()}, {{id2}}), InputError);

    // A coface that scales is not a bracket morphism.
    GradedMap twice = id2 + id2;
    CHECK_THROWS_AS(ScDgla({end2(), end2()}, {{twice, twice}}), MathCheckError);

    // A cosimplicial identity violation over an abelian algebra (where any
    // linear map is a morphism).
    Dgla ab = abmix();
    GradedMap idab = GradedMap::identity(ab.space());
    GradedMap twiceab = idab + idab;
    CHECK_THROWS_AS(ScDgla({ab, ab, ab}, {{idab, idab}, {idab, twiceab, idab}}),
                    MathCheckError);
    CHECK_NOTHROW(ScDgla({ab, ab, ab}, {{idab, idab}, {idab, idab, idab}}));
}

TEST_CASE("augmentations must equalize the first two cofaces") {
    Dgla L = end2();
    ScDgla g = cech3(L);
    GradedMap diag = select_map(L.space(), 1, {0, 0, 0});
    CHECK_NOTHROW(AugmentedScDgla(L, g, diag));

    GradedMap first_only = select_map(L.space(), 1, {0})
                               .compose(GradedMap::identity(L.space()));
    // Embed L into the first copy only: the two composites differ.
    std::map<int, Matrix> blocks;
    for (int q : L.space().degrees()) {
        Matrix m(3 * L.space().dim(q), L.space().dim(q));
        for (std::size_t i = 0; i < L.space().dim(q); ++i) m.at(i, i) = Rational(1);
        blocks[q] = std::move(m);
    }
    GradedMap single(L.space(), g.level(0).space(), 0, std::move(blocks));
    CHECK_THROWS_AS(AugmentedScDgla(L, g, single), MathCheckError);
}

// ------------------------------------------------------------ total complex

TEST_CASE("total differential follows the alternating coface rule") {
    ScDgla g = cech3(end2());

    // A single level-0 entry x: the image is (d x, coface_0 x - coface_1 x).
    gen::Rng rng(3);
    for (int j : {-1, 0, 1}) {
        TotElement y = random_tot(g, j, rng);
        TotElement dy = tot_differential(g, y);
        CHECK(dy.total_degree == j + 1);
        // Level 0 carries exactly the levelwise differential.
        CHECK(dy.levels[0] == g.level(0).d().apply(y.levels[0]));
        // d^2 = 0.
        CHECK(tot_equal(tot_differential(g, dy), tot_zero(g, j + 2)));
    }

    // Hardcoded instance: the degree-0 map "a" placed in the first copy.
    TotElement x = tot_basis(g, 0, 0, 0);
    TotElement dx = tot_differential(g, x);
    // d a = e in the first copy.
    CHECK(dx.levels[0] == elem(1, {R(1), R(0), R(0)}));
    // coface_0 keeps copies {1,2} so (a,0,0) maps to zero; coface_1 keeps
    // copies {0,0,1} so (a,0,0) lands as a in both pair slots 01 and 02,
    // entering with sign -1.
    CHECK(dx.levels[1] == elem(0, {R(-1), R(0), R(-1), R(0), R(0), R(0)}));
    CHECK(dx.levels[2].is_zero());

    CHECK_THROWS_AS(tot_add(tot_zero(g, 0), tot_zero(g, 1)), InputError);
}

TEST_CASE("total cohomology of glued covers and constant families") {
    // Constant families: the totalization has the cohomology of the fiber.
    auto dims_const_ab = tot_cohomology_dims(constant_sc(abmix(), 2));
    CHECK(dims_const_ab[-1] == 1);
    CHECK(dims_const_ab[0] == 1);
    CHECK(dims_const_ab[1] == 1);
    for (const auto& [j, n] : dims_const_ab)
        if (j < -1 || j > 1) CHECK(n == 0);

    for (const auto& [j, n] : tot_cohomology_dims(constant_sc(end2(), 2))) {
        CAPTURE(j);
        CHECK(n == 0);
    }

    // A contractible nerve glues to the fiber's cohomology as well.
    auto dims_cech_ab = tot_cohomology_dims(cech3(abmix()));
    CHECK(dims_cech_ab[-1] == 1);
    CHECK(dims_cech_ab[0] == 1);
    CHECK(dims_cech_ab[1] == 1);
    for (const auto& [j, n] : dims_cech_ab)
        if (j < -1 || j > 1) CHECK(n == 0);

    for (const auto& [j, n] : tot_cohomology_dims(cech3(end2()))) {
        CAPTURE(j);
        CHECK(n == 0);
    }
}

TEST_CASE("level windows shift and restrict the total cohomology") {
    ScDgla g = cech3(abmix());

    // Keeping only the top level shifts its cohomology by the level index.
    auto top = tot_cohomology_dims(truncate(g, 2, 2));
    CHECK(top[1] == 1);
    CHECK(top[2] == 1);
    CHECK(top[3] == 1);
    CHECK(top[0] == 0);

    // Keeping levels 0..1 leaves the two-step gluing complex.
    auto low = tot_cohomology_dims(truncate(g, 0, 1));
    CHECK(low[-1] == 1);
    CHECK(low[0] == 2);
    CHECK(low[1] == 2);
    CHECK(low[2] == 1);

    CHECK_THROWS_AS(truncate(g, 1, 0), InputError);
    CHECK_THROWS_AS(truncate(g, 0, 3), InputError);
}

// ------------------------------------------------- extension and integration

TEST_CASE("integration is a left inverse of the extension, exhaustively") {
    for (const ScDgla& g : {constant_sc(abmix(), 2), cech3(end2())}) {
        for (std::size_t i = 0; i <= g.top_level(); ++i) {
            for (int q : g.level(i).space().degrees()) {
                int j = q + static_cast<int>(i);
                for (std::size_t idx = 0; idx < g.level(i).space().dim(q); ++idx) {
                    TotElement y = tot_basis(g, j, i, idx);
                    TWElement E = whitney_map(g, 2, y);
                    CHECK(faces_compatible(g, 1, E));
                    CHECK(tot_equal(integration_map(g, E, j), y));
                }
            }
        }
    }
}

TEST_CASE("extension agrees with the elementary-form formulas") {
    ScDgla g = cech3(end2());
    const unsigned cap = 2;

    auto wedge = [&](std::size_t n, std::vector<unsigned> idx, const GradedElement& v) {
        return form_tensor(whitney_form(n, cap, idx), v);
    };

    // Level-0 input: a basis element of the second copy in degree 0.
    GradedElement x0 = basis_elt(g.level(0).space(), 0, 1);
    TWElement E0 = whitney_map(g, cap, tot_basis(g, 0, 0, 1));
    GradedElement d0x = g.coface(0, 1).apply(x0);
    GradedElement d1x = g.coface(1, 1).apply(x0);
    CHECK(E0.levels[0] == constant_form(0, cap, x0));
    CHECK(E0.levels[1] == wedge(1, {0}, d1x) + wedge(1, {1}, d0x));
    CHECK(E0.levels[2] ==
          wedge(2, {0}, g.coface(2, 2).apply(d1x)) +
              wedge(2, {1}, g.coface(2, 2).apply(d0x)) +
              wedge(2, {2}, g.coface(1, 2).apply(d0x)));

    // Level-1 input: a pair element in degree -1.
    GradedElement x1 = basis_elt(g.level(1).space(), -1, 2);
    TWElement E1 = whitney_map(g, cap, tot_basis(g, 0, 1, 2));
    CHECK(E1.levels[0].is_zero());
    CHECK(E1.levels[1] == wedge(1, {0, 1}, x1));
    CHECK(E1.levels[2] ==
          wedge(2, {0, 1}, g.coface(2, 2).apply(x1)) +
              wedge(2, {0, 2}, g.coface(1, 2).apply(x1)) +
              wedge(2, {1, 2}, g.coface(0, 2).apply(x1)));

    // Level-2 input: only the top elementary form appears.
    GradedElement x2 = basis_elt(g.level(2).space(), -1, 0);
    TWElement E2 = whitney_map(g, cap, tot_basis(g, 1, 2, 0));
    CHECK(E2.levels[0].is_zero());
    CHECK(E2.levels[1].is_zero());
    CHECK(E2.levels[2] == wedge(2, {0, 1, 2}, x2));
}

TEST_CASE("extension and integration are chain maps") {
    gen::Rng rng(11);
    for (const ScDgla& g : {cech3(end2()), constant_sc(abmix(), 2)}) {
        for (int j : {-1, 0, 1}) {
            for (int rep = 0; rep < 3; ++rep) {
                TotElement y = random_tot(g, j, rng);
                // Extension side.
                TWElement lhs = whitney_map(g, 3, tot_differential(g, y));
                TWElement rhs = tw_d(g, 1, whitney_map(g, 3, y));
                CHECK(lhs == rhs);
                // Integration side, on elements beyond the extension image.
                TWElement z = whitney_map(g, 3, y) +
                              tw_d(g, 1, whitney_map(g, 3, random_tot(g, j - 1, rng)));
                CHECK(tot_equal(integration_map(g, tw_d(g, 1, z), j + 1),
                                tot_differential(g, integration_map(g, z, j))));
            }
        }
    }
}

// ------------------------------------------------------- tuple calculus

TEST_CASE("tuple differential squares to zero, including off-image tuples") {
    ScDgla g = cech3(end2());
    auto A = make_dual_numbers(4);
    gen::Rng rng(17);

    for (int j : {0, 1}) {
        TWElement z = random_compatible(g, A, 4, j, rng);
        CHECK(tw_d(g, A.dim(), tw_d(g, A.dim(), z)).levels[2].is_zero());
        CHECK(tw_d(g, A.dim(), tw_d(g, A.dim(), z)) == tw_zero(g, 4));
    }

    // An arbitrary tuple that is not face-compatible: d^2 is still zero.
    TWElement z = tw_zero(g, 3);
    MPoly t1 = MPoly::variable(2, 0), t2 = MPoly::variable(2, 1);
    FormElem f(2, 3);
    f.add_to_slot(0, 2, 1, PolyForm::from_poly(2, 3, t1 * t2));
    f.add_to_slot(-1, 1, 0, PolyForm::term(2, 3, t2 * t2, 1u));
    f.add_to_slot(1, 1, 0, PolyForm::term(2, 3, t1, 2u));
    z.levels[2] = f;
    z.levels[1].add_to_slot(0, 6, 2, PolyForm::term(1, 3, MPoly::variable(1, 0), 1u));
    CHECK_FALSE(faces_compatible(g, 1, z));
    CHECK_THROWS_AS(check_faces(g, 1, z), MathCheckError);
    CHECK(tw_d(g, 1, tw_d(g, 1, z)) == tw_zero(g, 3));
}

TEST_CASE("tuple bracket: antisymmetry, Leibniz, Jacobi") {
    ScDgla g = cech3(end2());
    auto A = make_dual_numbers(4);
    const std::size_t r = A.dim();
    const unsigned cap = 8;
    gen::Rng rng(23);

    auto rand_deg = [&](int j) { return random_compatible(g, A, cap, j, rng); };

    for (auto [ja, jb] : std::vector<std::pair<int, int>>{{0, 1}, {1, 1}, {0, 0}, {-1, 1}}) {
        TWElement x = rand_deg(ja), y = rand_deg(jb);
        TWElement xy = tw_bracket(g, A, x, y);
        Rational sign = (ja * jb) % 2 == 0 ? R(-1) : R(1);
        CHECK(xy == scaled_tw(tw_bracket(g, A, y, x), sign));

        // Graded Leibniz rule.
        TWElement lhs = tw_d(g, r, xy);
        TWElement rhs = tw_bracket(g, A, tw_d(g, r, x), y);
        TWElement second = tw_bracket(g, A, x, tw_d(g, r, y));
        rhs = (ja % 2 == 0) ? rhs + second : rhs - second;
        CHECK(lhs == rhs);
    }

    // Graded Jacobi with degrees (1, 1, 0): [x,[y,z]] = [[x,y],z] - [y,[x,z]].
    {
        TWElement x = rand_deg(1), y = rand_deg(1), z = rand_deg(0);
        TWElement lhs = tw_bracket(g, A, x, tw_bracket(g, A, y, z));
        TWElement rhs = tw_bracket(g, A, tw_bracket(g, A, x, y), z) -
                        tw_bracket(g, A, y, tw_bracket(g, A, x, z));
        CHECK(lhs == rhs);
    }
    // Degrees (0, 1, -1): [x,[y,z]] = [[x,y],z] + [y,[x,z]].
    {
        TWElement x = rand_deg(0), y = rand_deg(1), z = rand_deg(-1);
        TWElement lhs = tw_bracket(g, A, x, tw_bracket(g, A, y, z));
        TWElement rhs = tw_bracket(g, A, tw_bracket(g, A, x, y), z) +
                        tw_bracket(g, A, y, tw_bracket(g, A, x, z));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("gauge action and composition on tuples and interval elements") {
    ScDgla g = cech3(end2());
    auto A = make_dual_numbers(3);
    const unsigned cap = 8;
    gen::Rng rng(31);

    for (int rep = 0; rep < 3; ++rep) {
        TWElement a = random_compatible(g, A, cap, 0, rng);
        TWElement y = tw_gauge(g, A, a, tw_zero(g, cap));
        CHECK(faces_compatible(g, A.dim(), y));
        CHECK(tw_is_mc(g, A, y));
        CHECK(tw_mc_defect(g, A, y) == tw_zero(g, cap));

        // Gauging a deformation element by another parameter stays one.
        TWElement b = random_compatible(g, A, cap, 0, rng);
        CHECK(tw_is_mc(g, A, tw_gauge(g, A, b, y)));
    }

    // A tuple with a nonvanishing defect is recognized: doubling a gauged
    // solution adds its self-bracket to the defect while staying
    // face-compatible.
    bool found_defect = false;
    for (unsigned seed = 100; seed < 130 && !found_defect; ++seed) {
        gen::Rng r2(seed);
        TWElement a = random_compatible(g, A, cap, 0, r2);
        TWElement y = tw_gauge(g, A, a, tw_zero(g, cap));
        if (tw_bracket(g, A, y, y) == tw_zero(g, cap)) continue;
        found_defect = true;
        TWElement yy = y + y;
        CHECK(faces_compatible(g, A.dim(), yy));
        CHECK_FALSE(tw_is_mc(g, A, yy));
    }
    CHECK(found_defect);

    // Composition law through the interval algebra: gauging twice equals
    // gauging by the composed parameter.
    const Dgla& L1 = g.level(1);
    auto rand_datum = [&](gen::Rng& r2) {
        MPoly t = MPoly::variable(1, 0);
        MPoly p0 = MPoly(1, r2.rational(2, 2)) + t * r2.rational(2, 2);
        MPoly p1 = MPoly(1, r2.rational(2, 2)) + t * t * r2.rational(2, 2);
        FormElem out = form_tensor(PolyForm::from_poly(1, cap, p0),
                                   basis_elt(L1.space(), 0, r2.index(6)));
        out += form_tensor(PolyForm::term(1, cap, p1, 1u),
                           basis_elt(L1.space(), -1, r2.index(3)));
        return promote_form(out, gen::random_m_vec(A, r2));
    };
    for (int rep = 0; rep < 3; ++rep) {
        FormElem a = rand_datum(rng), b = rand_datum(rng);
        FormElem x = level_gauge(L1, A, rand_datum(rng), FormElem(1, cap));
        CHECK(level_mc_defect(L1, A, x).is_zero());
        FormElem two_step = level_gauge(L1, A, a, level_gauge(L1, A, b, x));
        FormElem one_step = level_gauge(L1, A, level_bch(L1, A, a, b), x);
        CHECK(two_step == one_step);
    }

    FormElem lvl1 = promote_form(
        form_tensor(PolyForm::scalar(1, cap, R(1)), basis_elt(L1.space(), 0, 0)),
        {R(1), R(0)});
    FormElem lvl2 = promote_form(
        form_tensor(PolyForm::scalar(2, cap, R(1)), basis_elt(L1.space(), 0, 0)),
        {R(1), R(0)});
    CHECK_THROWS_AS(level_bracket(L1, A, lvl1, lvl2), InputError);
}

TEST_CASE("constant tuples through the augmentation") {
    Dgla L = end2();
    ScDgla g = cech3(L);
    GradedMap diag = select_map(L.space(), 1, {0, 0, 0});
    AugmentedScDgla ag(L, g, diag);
    auto A = make_dual_numbers(4);
    const std::size_t r = A.dim();
    const unsigned cap = 6;
    gen::Rng rng(41);

    // Plain embedding: the three levels are the evident constants.
    GradedElement x = basis_elt(L.space(), 0, 0) + basis_elt(L.space(), 1, 0);
    TWElement em = augment_embed(ag, cap, 1, x);
    CHECK(em.levels[0] == constant_form(0, cap, diag.apply(x)));
    CHECK(em.levels[1] == constant_form(1, cap, diag.apply(x)));
    CHECK(em.levels[2] == constant_form(2, cap, x));
    CHECK(faces_compatible(g, 1, em));

    // Chain map and bracket compatibility over the Artinian coefficients.
    for (int deg_a : {-1, 0, 1}) {
        GradedElement xa = gen::random_tensored(L.space(), deg_a, A, rng);
        GradedElement xb = gen::random_tensored(L.space(), 1 - deg_a, A, rng);
        TWElement ea = augment_embed(ag, cap, r, xa);
        CHECK(augment_embed(ag, cap, r, dgla::differential(L, A, xa)) ==
              tw_d(g, r, ea));
        CHECK(augment_embed(ag, cap, r, dgla::bracket(L, A, xa, xb)) ==
              tw_bracket(g, A, ea, augment_embed(ag, cap, r, xb)));
    }

    // Deformation elements embed to deformation tuples.
    GradedElement mc = gen::random_mc(L, A, rng);
    CHECK(tw_is_mc(g, A, augment_embed(ag, cap, r, mc)));
}

// ----------------------------------------------- capped forms cohomology

TEST_CASE("face-compatible forms compute the total cohomology") {
    auto look = [](const std::map<int, std::size_t>& m, int j) -> std::size_t {
        auto it = m.find(j);
        return it == m.end() ? 0 : it->second;
    };
    for (const ScDgla& g :
         {constant_sc(abmix(), 2), constant_sc(end2(), 2), cech3(abmix()), cech3(end2())}) {
        auto tot = tot_cohomology_dims(g);
        auto tw = tw_cohomology_dims(g, 3, -1, 2);
        for (int j = -1; j <= 2; ++j) {
            CAPTURE(j);
            CHECK(look(tw, j) == look(tot, j));
        }
        // The window has headroom at this cap: enlarging it changes nothing.
        auto tw4 = tw_cohomology_dims(g, 4, -1, 2);
        for (int j = -1; j <= 2; ++j) CHECK(look(tw4, j) == look(tw, j));
    }
}

TEST_CASE("projection criterion for the three-level window") {
    // Dropping nothing, or levels that cannot carry low-degree classes,
    // keeps the comparison statements true.
    TruncationComparison triv = truncation_criterion(constant_sc(abmix(), 2));
    CHECK(triv.h0_surjective);
    CHECK(triv.h1_bijective);
    CHECK(triv.h2_injective);

    TruncationComparison acyclic = truncation_criterion(constant_sc(end2(), 3));
    CHECK(acyclic.h0_surjective);
    CHECK(acyclic.h1_bijective);
    CHECK(acyclic.h2_injective);

    Dgla ab = abmix();
    TruncationComparison deg0 =
        truncation_criterion(constant_plus_isolated(ab, gen::abelian_dgla(GradedSpace({{0, 1}}))));
    CHECK(deg0.h0_surjective);
    CHECK(deg0.h1_bijective);
    CHECK(deg0.h2_injective);

    TruncationComparison degm3 = truncation_criterion(
        constant_plus_isolated(ab, gen::abelian_dgla(GradedSpace({{-3, 1}}))));
    CHECK(degm3.h0_surjective);
    CHECK(degm3.h1_bijective);
    CHECK(degm3.h2_injective);

    // An isolated degree -1 line at level 3 contributes a degree-2 class
    // that the window forgets: injectivity fails there.
    TruncationComparison degm1 = truncation_criterion(
        constant_plus_isolated(ab, gen::abelian_dgla(GradedSpace({{-1, 1}}))));
    CHECK(degm1.h0_surjective);
    CHECK(degm1.h1_bijective);
    CHECK_FALSE(degm1.h2_injective);

    // A full constant level 3 also carries a forgotten degree-2 class when
    // the fiber has one in degree -1.
    TruncationComparison full3 = truncation_criterion(constant_sc(ab, 3));
    CHECK(full3.h0_surjective);
    CHECK(full3.h1_bijective);
    CHECK_FALSE(full3.h2_injective);
}

// ------------------------------------------------------- MC decompositions

namespace {

// Canonical splitting of the end2 algebra: gauge part spanned by h and a,
// image part by a+b and e, deformation part trivial.
Splitting end2_splitting() {
    Splitting S;
    S.sub_c[-1] = mat(1, 1, {1});
    S.sub_c[0] = mat(2, 1, {1, 0});
    S.sub_d[0] = mat(2, 1, {1, 1});
    S.sub_d[1] = mat(1, 1, {1});
    return S;
}

// Splitting of end2 + abelian(-1,0,1): the abelian part is the deformation
// part.
Splitting sum_splitting() {
    Splitting S;
    S.sub_m[-1] = mat(2, 1, {0, 1});
    S.sub_m[0] = mat(3, 1, {0, 0, 1});
    S.sub_m[1] = mat(2, 1, {0, 1});
    S.sub_c[-1] = mat(2, 1, {1, 0});
    S.sub_c[0] = mat(3, 1, {1, 0, 0});
    S.sub_d[0] = mat(3, 1, {1, 1, 0});
    S.sub_d[1] = mat(2, 1, {1, 0});
    return S;
}

// -log(1 + u) over the dual-number basis, truncated by nilpotency.
Vec minus_log1p(const ArtinAlgebra& A, const Vec& u) {
    Vec acc(A.dim(), Rational(0));
    Vec power = u;
    for (unsigned k = 1; !std::all_of(power.begin(), power.end(),
                                      [](const Rational& c) { return c.is_zero(); });
         ++k) {
        Rational coeff = (k % 2 == 0 ? R(1) : R(-1)) / R(static_cast<long>(k));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += power[i] * coeff;
        power = A.multiply(power, u);
    }
    return acc;
}

} // namespace

TEST_CASE("splitting validation accepts the canonical data and rejects junk") {
    Dgla L = end2();
    CHECK_NOTHROW(validate_splitting(L, end2_splitting()));
    CHECK_NOTHROW(validate_splitting(gen::direct_sum(L, abmix(), CheckLevel::none),
                                     sum_splitting()));

    // All-deformation splitting of an abelian algebra.
    Splitting ab_all;
    ab_all.sub_m[-1] = Matrix::identity(1);
    ab_all.sub_m[0] = Matrix::identity(1);
    ab_all.sub_m[1] = Matrix::identity(1);
    CHECK_NOTHROW(validate_splitting(abmix(), ab_all));

    // Parts that overlap are rejected.
    Splitting overlap = end2_splitting();
    overlap.sub_m[0] = mat(2, 1, {1, 0});
    CHECK_THROWS_AS(validate_splitting(L, overlap), MathCheckError);

    // A gauge part killed by the differential cannot match the image part.
    Splitting degenerate = end2_splitting();
    degenerate.sub_c[0] = mat(2, 1, {1, 1});  // d(a+b) = 0
    CHECK_THROWS_AS(validate_splitting(L, degenerate), MathCheckError);

    // An image part with no matching gauge part is an orphan.
    Splitting orphan;
    orphan.sub_m[-1] = Matrix::identity(1);
    orphan.sub_m[0] = mat(2, 2, {1, 0, 0, 1});
    orphan.sub_d[1] = Matrix::identity(1);
    CHECK_THROWS_AS(validate_splitting(L, orphan), MathCheckError);

    // Wrong column heights are input errors.
    Splitting tall = end2_splitting();
    tall.sub_c[0] = mat(3, 1, {1, 0, 0});
    CHECK_THROWS_AS(validate_splitting(L, tall), InputError);
}

TEST_CASE("gauge decomposition matches the logarithm on the model algebra") {
    Dgla L = end2();
    Splitting S = end2_splitting();
    auto A = make_dual_numbers(4);

    for (Vec u : {Vec{R(1), R(0), R(0)}, Vec{R(1), R(1), R(0)}, Vec{R(0), R(2), R(-1)}}) {
        // y = u * e is a deformation element (d e = 0, [e,e] = 0).
        GradedElement y = elem(1, u);
        Decomposition dec = decompose_mc(L, A, S, y);
        CHECK(dec.x.is_zero());
        // The gauge parameter is -log(1+u) * a: a fully independent series
        // computation.
        Vec v = minus_log1p(A, u);
        Vec expect(2 * A.dim(), Rational(0));
        for (std::size_t e = 0; e < A.dim(); ++e) expect[e] = v[e];
        CHECK(dec.c == elem(0, expect));
        // And it reproduces y.
        CHECK(dgla::gauge(L, A, dec.c, GradedElement()) == y);
    }
}

TEST_CASE("gauge decomposition inverts planted data uniquely") {
    Dgla L = gen::direct_sum(end2(), abmix(), CheckLevel::none);
    Splitting S = sum_splitting();

    for (unsigned n : {3u, 4u}) {
        auto A = make_dual_numbers(n);
        gen::Rng rng(100 + n);
        for (int rep = 0; rep < 4; ++rep) {
            // Deformation part: the abelian degree-1 line; gauge part: the
            // a-direction.
            Vec xv(2 * A.dim(), Rational(0)), cv(3 * A.dim(), Rational(0));
            for (std::size_t e = 0; e < A.dim(); ++e) {
                xv[A.dim() + e] = rng.rational(2, 2);
                cv[e] = rng.rational(2, 2);
            }
            GradedElement x = elem(1, xv), c = elem(0, cv);
            GradedElement y = dgla::gauge(L, A, c, x);
            REQUIRE(dgla::is_mc(L, A, y));

            Decomposition dec = decompose_mc(L, A, S, y);
            CHECK(dec.x == x);
            CHECK(dec.c == c);
        }

        // Elements already in the deformation part decompose trivially.
        Vec xv(2 * A.dim(), Rational(0));
        xv[A.dim()] = R(1);
        Decomposition triv = decompose_mc(L, A, S, elem(1, xv));
        CHECK(triv.x == elem(1, xv));
        CHECK(triv.c.is_zero());
        Decomposition zero = decompose_mc(L, A, S, GradedElement());
        CHECK(zero.x.is_zero());
        CHECK(zero.c.is_zero());
    }
}

TEST_CASE("gauge decomposition rejects non-solutions of the equation") {
    // Degrees 1 and 2 with [v,v] = 2w: epsilon*v violates the equation as
    // soon as epsilon^2 survives.
    GradedSpace s({{1, 1}, {2, 1}});
    Dgla quad(s, GradedMap::zero(s, s, 1), {{1, 0, 1, 0, 0, R(2)}});
    Splitting S;
    S.sub_m[1] = Matrix::identity(1);
    S.sub_m[2] = Matrix::identity(1);
    CHECK_NOTHROW(validate_splitting(quad, S));

    auto A2 = make_dual_numbers(2);
    GradedElement y2 = elem(1, {R(1)});
    Decomposition dec = decompose_mc(quad, A2, S, y2);
    CHECK(dec.x == y2);
    CHECK(dec.c.is_zero());

    auto A3 = make_dual_numbers(3);
    GradedElement y3 = elem(1, {R(1), R(0)});
    CHECK_THROWS_AS(decompose_mc(quad, A3, S, y3), MathCheckError);
}

// ----------------------------------------------------------- normal forms

TEST_CASE("interval normal form: zero, closed form, and round trips") {
    const unsigned cap = 8;

    // Zero tuple.
    {
        ScDgla g = cech3(end2());
        auto A = make_dual_numbers(3);
        NormalForm01 nf = normal_form_01(g, A, tw_zero(g, cap), cap);
        CHECK(nf.x.is_zero());
        CHECK(nf.p.is_zero());
        CHECK(levels01_equal(assemble_01(g, A, nf.x, nf.p, cap), tw_zero(g, cap)));
    }

    // Abelian constant family: the path is forced to be (1 - t) times the
    // interval's dt-coefficient, an explicit closed form.
    {
        ScDgla g = constant_sc(abmix(), 2);
        auto A = make_dual_numbers(3);
        gen::Rng rng(7);
        GradedElement x = gen::random_tensored(g.level(0).space(), 1, A, rng);
        GradedElement m = gen::random_tensored(g.level(0).space(), 0, A, rng);
        TWElement y;
        y.levels = {constant_form(0, cap, x),
                    constant_form(1, cap, x) +
                        form_tensor(PolyForm::term(1, cap, MPoly(1, R(1)), 1u), m)};
        NormalForm01 nf = normal_form_01(g, A, y, cap);
        CHECK(nf.x == x);
        MPoly one_minus_t = MPoly(1, R(1)) - MPoly::variable(1, 0);
        CHECK(nf.p == form_tensor(PolyForm::from_poly(1, cap, one_minus_t), m));
        CHECK(levels01_equal(assemble_01(g, A, nf.x, nf.p, cap), y));
    }

    // Generic gauge tuples round-trip through the normal form.
    {
        ScDgla g = cech3(end2());
        auto A = make_dual_numbers(3);
        gen::Rng rng(53);
        for (int rep = 0; rep < 3; ++rep) {
            TWElement y = tw_gauge(g, A, random_compatible(g, A, cap, 0, rng),
                                   tw_zero(g, cap));
            NormalForm01 nf = normal_form_01(g, A, y, cap);
            CHECK(levels01_equal(assemble_01(g, A, nf.x, nf.p, cap), y));
            // The path vanishes at the far endpoint and gauges the zeroth
            // coface image to the first at the near one.
            auto [p0, p1] = path_endpoints(nf.p);
            CHECK(p1.is_zero());
            GradedMap d01 = defo::graded::tensor_map_artin(g.coface(0, 1), A);
            GradedMap d11 = defo::graded::tensor_map_artin(g.coface(1, 1), A);
            CHECK(dgla::gauge(g.level(1), A, p0, d01.apply(nf.x)) ==
                  d11.apply(nf.x));
        }
    }

    // Planted normal-form data is recovered exactly.
    {
        ScDgla g = constant_sc(end2(), 2);
        auto A = make_dual_numbers(3);
        gen::Rng rng(59);
        for (int rep = 0; rep < 3; ++rep) {
            GradedElement x = gen::random_mc(g.level(0), A, rng);
            // Path with both endpoints zero: t(1-t) times random data.
            MPoly t = MPoly::variable(1, 0);
            MPoly window = t * (MPoly(1, R(1)) - t);
            FormElem p(1, cap);
            std::size_t slots = g.level(1).space().dim(0) * A.dim();
            for (std::size_t i = 0; i < slots; ++i) {
                MPoly poly = window * (MPoly(1, rng.rational(2, 2)) + t * rng.rational(2, 2));
                p.add_to_slot(0, slots, i, PolyForm::from_poly(1, cap, poly));
            }
            TWElement y = assemble_01(g, A, x, p, cap);
            NormalForm01 nf = normal_form_01(g, A, y, cap);
            CHECK(nf.x == x);
            CHECK(nf.p == p);
        }
    }
}

TEST_CASE("interval normal form rejects malformed tuples") {
    ScDgla g = constant_sc(end2(), 2);
    auto A = make_dual_numbers(3);
    const unsigned cap = 6;

    TWElement short_tuple;
    short_tuple.levels = {FormElem(0, cap)};
    CHECK_THROWS_AS(normal_form_01(g, A, short_tuple, cap), InputError);

    // Face-incompatible: a constant level-1 entry over a zero level 0.
    TWElement broken = tw_zero(g, cap);
    broken.levels[1] = promote_form(
        constant_form(1, cap, basis_elt(g.level(1).space(), 1, 0)), {R(1), R(0)});
    CHECK_THROWS_AS(normal_form_01(g, A, broken, cap), MathCheckError);

    // Compatible but not a solution of the deformation equation: doubling a
    // gauged solution with a nonvanishing self-bracket.  The glued cover
    // makes the interval level see the defect (a constant family hides it in
    // a commuting span).
    ScDgla gc = cech3(end2());
    gen::Rng rng(71);
    bool found_defect = false;
    for (int rep = 0; rep < 30 && !found_defect; ++rep) {
        TWElement y = tw_gauge(gc, A, random_compatible(gc, A, cap, 0, rng),
                               tw_zero(gc, cap));
        // The defect of the doubled tuple is the self-bracket; it has to
        // show up at the interval level for this map to see it.
        if (level_bracket(gc.level(1), A, y.levels[1], y.levels[1]).is_zero()) continue;
        found_defect = true;
        TWElement yy = y + y;
        CHECK(faces_compatible(gc, A.dim(), yy));
        CHECK_THROWS_AS(normal_form_01(gc, A, yy, cap), MathCheckError);
    }
    CHECK(found_defect);
}

TEST_CASE("triangle normal form: zero and gauge round trips") {
    const unsigned cap = 8;

    {
        ScDgla g = cech3(end2());
        auto A = make_dual_numbers(2);
        NormalForm02 nf = normal_form_02(g, A, tw_zero(g, cap), cap);
        CHECK(nf.x.is_zero());
        CHECK(nf.p.is_zero());
        CHECK(nf.q.is_zero());
        CHECK(nf.rr.is_zero());
        CHECK(assemble_02(g, A, nf, cap) == tw_zero(g, cap));
    }

    for (unsigned n : {2u, 3u}) {
        ScDgla g = cech3(end2());
        auto A = make_dual_numbers(n);
        gen::Rng rng(61 + n);
        for (int rep = 0; rep < 2; ++rep) {
            TWElement y = tw_gauge(g, A, random_compatible(g, A, cap, 0, rng),
                                   tw_zero(g, cap));
            NormalForm02 nf = normal_form_02(g, A, y, cap);
            TWElement back = assemble_02(g, A, nf, cap);
            CHECK(back == y);
            // Idempotence: the normal form of the reassembled tuple is the
            // same normal form.
            NormalForm02 nf2 = normal_form_02(g, A, back, cap);
            CHECK(nf2.x == nf.x);
            CHECK(nf2.p == nf.p);
            CHECK(nf2.q == nf.q);
            CHECK(nf2.rr == nf.rr);
        }
    }

    // Constant family round trip as well.
    {
        ScDgla g = constant_sc(end2(), 2);
        auto A = make_dual_numbers(3);
        gen::Rng rng(71);
        TWElement y = tw_gauge(g, A, random_compatible(g, A, cap, 0, rng),
                               tw_zero(g, cap));
        NormalForm02 nf = normal_form_02(g, A, y, cap);
        CHECK(assemble_02(g, A, nf, cap) == y);
    }
}

TEST_CASE("triangle normal form rejects malformed tuples") {
    ScDgla g = cech3(end2());
    auto A = make_dual_numbers(2);
    const unsigned cap = 6;

    TWElement short_tuple;
    short_tuple.levels = {FormElem(0, cap), FormElem(1, cap)};
    CHECK_THROWS_AS(normal_form_02(g, A, short_tuple, cap), InputError);

    TWElement broken = tw_zero(g, cap);
    broken.levels[2] = promote_form(
        constant_form(2, cap, basis_elt(g.level(2).space(), 1, 0)), {R(1)});
    CHECK_THROWS_AS(normal_form_02(g, A, broken, cap), MathCheckError);
}
