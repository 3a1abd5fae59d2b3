#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "defo/groebner.hpp"
#include "defo/matrix.hpp"
#include "defo/mpoly.hpp"
#include "defo/rational.hpp"

using namespace defo::exactalg;

TEST_CASE("rational parsing and normalization") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-2") == Rational(-2));
    CHECK(Rational::parse("0/5").is_zero());
    CHECK(Rational::parse("6/4") == Rational(3, 2));
    CHECK(Rational::parse("-6/-4") == Rational(3, 2));
    CHECK_THROWS_AS(Rational::parse("1/0"), defo::InputError);
    CHECK_THROWS_AS(Rational::parse(""), defo::InputError);
    CHECK_THROWS_AS(Rational::parse("a"), defo::InputError);
    CHECK_THROWS_AS(Rational::parse("1//2"), defo::InputError);
    CHECK_THROWS_AS(Rational::parse("1/2/3"), defo::InputError);
}

TEST_CASE("rational arithmetic identities") {
    Rational a(3, 7), b(-5, 2), c(11, 13);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * a.inverse() == Rational(1));
    CHECK((a - a).is_zero());
    CHECK(a.pow(3) == a * a * a);
    CHECK(b.abs() == Rational(5, 2));
    CHECK(b.sign() == -1);
    CHECK(Rational(0).sign() == 0);
    CHECK_THROWS_AS(Rational(0).inverse(), defo::MathCheckError);
    CHECK(Rational(-6, -4) == Rational(3, 2));
    CHECK(a.str() == "3/7");
    CHECK(Rational(5).str() == "5");
    CHECK(Rational(-1, 2).str() == "-1/2");
}

TEST_CASE("factorials and binomials") {
    CHECK(Rational::factorial(0) == Rational(1));
    CHECK(Rational::factorial(5) == Rational(120));
    CHECK(Rational::factorial(10) == Rational(3628800));
    CHECK(Rational::binomial(10, 3) == Rational(120));
    CHECK(Rational::binomial(7, 0) == Rational(1));
    CHECK(Rational::binomial(4, 6) == Rational(0));
}

namespace {

Matrix mat(std::size_t r, std::size_t c, std::vector<int> vals) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Rational(vals[i * c + j]);
    return m;
}

Vec vec(std::vector<int> vals) {
    Vec v;
    for (int x : vals) v.push_back(Rational(x));
    return v;
}

} // namespace

TEST_CASE("rref, rank, kernel") {
    // Row-reduce a 3x4 matrix with one dependent row.
    Matrix m = mat(3, 4, {1, 2, 0, 3,
                          2, 4, 1, 7,
                          3, 6, 1, 10});
    CHECK(rank(m) == 2);
    Matrix k = kernel_basis(m);
    CHECK(k.cols() == 2);
    CHECK((m * k).is_zero());

    Matrix id = Matrix::identity(4);
    CHECK(rank(id) == 4);
    CHECK(kernel_basis(id).cols() == 0);
}

TEST_CASE("linear solving") {
    Matrix a = mat(3, 3, {2, 1, 0,
                          0, 1, 1,
                          1, 0, 1});
    Vec b = vec({3, 5, 4});
    auto x = solve_linear(a, b);
    REQUIRE(x.has_value());
    CHECK(a.apply(*x) == b);

    // Inconsistent system.
    Matrix s = mat(2, 2, {1, 1, 1, 1});
    CHECK(!solve_linear(s, vec({1, 2})).has_value());

    // Underdetermined: a solution exists and free variables are set to zero,
    // so solving twice gives the same answer.
    Matrix u = mat(1, 3, {1, 2, 3});
    auto y1 = solve_linear(u, vec({6}));
    auto y2 = solve_linear(u, vec({6}));
    REQUIRE(y1.has_value());
    CHECK(*y1 == *y2);
    CHECK(u.apply(*y1) == vec({6}));

    auto inv = inverse(a);
    REQUIRE(inv.has_value());
    CHECK(*inv * a == Matrix::identity(3));
    CHECK(!inverse(s).has_value());
}

TEST_CASE("solved system reuse") {
    Matrix a = mat(3, 2, {1, 0,
                          1, 1,
                          0, 1});
    SolvedSystem sys(a);
    CHECK(sys.unknowns() == 2);
    CHECK(sys.rank() == 2);
    CHECK(sys.unique());
    auto x = sys.solve(vec({1, 3, 2}));
    REQUIRE(x.has_value());
    CHECK(a.apply(*x) == vec({1, 3, 2}));
    CHECK(!sys.solve(vec({1, 0, 1})).has_value());

    // Consistency with the one-shot solver on a square invertible system.
    Matrix q = mat(2, 2, {2, 1, 1, 1});
    SolvedSystem qs(q);
    for (auto rhs : {vec({1, 0}), vec({0, 1}), vec({7, -3})}) {
        auto via_sys = qs.solve(rhs);
        auto via_one = solve_linear(q, rhs);
        REQUIRE(via_sys.has_value());
        REQUIRE(via_one.has_value());
        CHECK(*via_sys == *via_one);
    }
}

TEST_CASE("matrix block and product helpers") {
    Matrix a = mat(2, 2, {1, 2, 3, 4});
    Matrix b = mat(2, 2, {0, 1, 1, 0});
    CHECK(a.hcat(b).cols() == 4);
    CHECK(a.vcat(b).rows() == 4);
    CHECK(a.transposed().at(0, 1) == Rational(3));
    Matrix kr = a.kron(b);
    CHECK(kr.rows() == 4);
    CHECK(kr.at(0, 1) == Rational(1));   // a00*b01
    CHECK(kr.at(2, 1) == Rational(3));   // a10*b01
    CHECK(a.column_basis().cols() == 2);
    CHECK(mat(2, 2, {1, 2, 2, 4}).column_basis().cols() == 1);
    CHECK(in_column_span(mat(2, 1, {1, 2}), vec({3, 6})));
    CHECK(!in_column_span(mat(2, 1, {1, 2}), vec({1, 0})));
}

TEST_CASE("cohomology of a two-step complex") {
    // 0 -> Q^2 --din--> Q^3 --dout--> Q^2, dout*din = 0.
    Matrix din = mat(3, 2, {1, 0,
                            0, 0,
                            0, 1});
    Matrix dout = mat(2, 3, {0, 1, 0,
                             0, 0, 0});
    REQUIRE((dout * din).is_zero());
    // ker dout has dim 2, im din has dim 2, middle cohomology is 0.
    CHECK(cohomology_dim_at(dout, din) == 0);

    // Make the middle cohomology one-dimensional instead.
    Matrix din2 = mat(3, 2, {1, 1,
                             0, 0,
                             1, 1});
    REQUIRE((dout * din2).is_zero());
    CHECK(cohomology_dim_at(dout, din2) == 1);
    Matrix reps = cohomology_representatives(dout, din2);
    CHECK(reps.cols() == 1);
    CHECK((dout * reps).is_zero());
    // Coordinates of a cocycle in terms of the representative basis.
    Vec z = vec({2, 0, 5});  // in ker dout
    auto coords = cohomology_coordinates(reps, din2, z);
    REQUIRE(coords.has_value());
    CHECK(coords->size() == 1);
    // A coboundary has zero coordinates.
    auto cb = cohomology_coordinates(reps, din2, vec({3, 0, 3}));
    REQUIRE(cb.has_value());
    CHECK((*cb)[0].is_zero());
}

TEST_CASE("polynomial arithmetic") {
    std::size_t n = 2;
    MPoly x = MPoly::variable(n, 0), y = MPoly::variable(n, 1);
    MPoly p = (x + y) * (x + y);
    MPoly q = x * x + x * y * Rational(2) + y * y;
    CHECK(p == q);
    CHECK(p.degree() == 2);
    CHECK((p - q).is_zero());
    CHECK((x * y - y * x).is_zero());
    CHECK((x + y).pow(3) == p * (x + y));
    CHECK(p.eval({Rational(2), Rational(3)}) == Rational(25));
    CHECK(MPoly(n, Rational(7)).is_constant());
    CHECK(p.derivative(0) == x * Rational(2) + y * Rational(2));
}

TEST_CASE("polynomial substitution") {
    std::size_t n = 2;
    MPoly x = MPoly::variable(n, 0), y = MPoly::variable(n, 1);
    MPoly p = x * x + y;
    // x -> u+v, y -> u*v in new variables (u, v).
    MPoly u = MPoly::variable(2, 0), v = MPoly::variable(2, 1);
    MPoly s = p.substitute({u + v, u * v});
    CHECK(s == u * u + u * v * Rational(2) + v * v + u * v);
    // Substituting constants matches eval.
    MPoly c = p.substitute({MPoly(0, Rational(2)), MPoly(0, Rational(3))});
    REQUIRE(c.is_constant());
    CHECK(c.constant_term() == p.eval({Rational(2), Rational(3)}));
}

TEST_CASE("leading terms under both orders") {
    std::size_t n = 2;
    MPoly x = MPoly::variable(n, 0), y = MPoly::variable(n, 1);
    // f = x*y^2 + x^2: grevlex picks x*y^2 (degree 3), lex picks x^2.
    MPoly f = x * y * y + x * x;
    CHECK(f.leading_term(MonomialOrder::grevlex).first == Expo{1, 2});
    CHECK(f.leading_term(MonomialOrder::lex).first == Expo{2, 0});
    // Graded tie at equal total degree: grevlex prefers the power of the
    // earlier variable, x^2 > x*y > y^2.
    MPoly g = x * y + y * y + x * x;
    CHECK(g.leading_term(MonomialOrder::grevlex).first == Expo{2, 0});
}

TEST_CASE("exact division") {
    std::size_t n = 2;
    MPoly x = MPoly::variable(n, 0), y = MPoly::variable(n, 1);
    MPoly num = x * x - y * y;
    MPoly den = x - y;
    CHECK(num.exact_divide(den) == x + y);
    CHECK((den * (x + y)).exact_divide(den) == x + y);
    CHECK_THROWS_AS((x * x + y * y).exact_divide(x - y), defo::NotDivisible);
    CHECK_THROWS_AS(num.exact_divide(MPoly(n)), defo::MathCheckError);
    CHECK(MPoly(n).exact_divide(den).is_zero());
}

TEST_CASE("groebner basis of a simple ideal") {
    std::size_t n = 2;
    MPoly x = MPoly::variable(n, 0), y = MPoly::variable(n, 1);
    // <x^2 - 1, y - x>: reduced grevlex basis is {y - x, x^2 - 1} up to order,
    // with monic leading coefficients.
    PolyIdeal ideal{n, {x * x - MPoly(n, Rational(1)), y - x}};
    auto gb = groebner(ideal, {});
    REQUIRE(gb.size() == 2);
    for (const auto& p : gb) {
        CHECK(p.leading_term(MonomialOrder::grevlex).second == Rational(1));
        // Each member reduces to zero against the others' span: verify by
        // normal form against the full basis of the generators' combinations.
        CHECK(normal_form(p, gb, MonomialOrder::grevlex).is_zero());
    }
    // The basis is canonical: generator order must not matter.
    PolyIdeal ideal2{n, {y - x, x * x - MPoly(n, Rational(1))}};
    CHECK(groebner(ideal2, {}) == gb);

    CHECK(normal_form(x * x, gb, MonomialOrder::grevlex) == MPoly(n, Rational(1)));
    CHECK(normal_form(y * y, gb, MonomialOrder::grevlex) == MPoly(n, Rational(1)));
    CHECK(is_zero_dimensional(gb, n, MonomialOrder::grevlex));
    CHECK(!is_zero_dimensional(groebner(PolyIdeal{n, {y - x * x}}, {}), n,
                               MonomialOrder::grevlex));
}

TEST_CASE("solvability decisions") {
    std::size_t n = 2;
    MPoly x = MPoly::variable(n, 0), y = MPoly::variable(n, 1);
    MPoly one(n, Rational(1));
    // <x, 1 - x> contains 1: unsolvable.
    CHECK(!ideal_has_solution(PolyIdeal{n, {x, one - x}}, {}));
    // <x + y, x*y - 1> is solvable over the complex numbers (x = -y, y^2 = -1)
    // but has no rational point.
    PolyIdeal gauss{n, {x + y, x * y - one}};
    CHECK(ideal_has_solution(gauss, {}));
    CHECK(!rational_point(gauss, {}).has_value());
}

TEST_CASE("rational point extraction") {
    std::size_t n = 2;
    MPoly x = MPoly::variable(n, 0), y = MPoly::variable(n, 1);
    MPoly one(n, Rational(1));
    // <x^2 - 1, y - x> has points (1,1) and (-1,-1).
    PolyIdeal ideal{n, {x * x - one, y - x}};
    auto pt = rational_point(ideal, {});
    REQUIRE(pt.has_value());
    REQUIRE(pt->size() == 2);
    for (const auto& g : ideal.gens) CHECK(g.eval(*pt).is_zero());

    // Non-integral coordinates: <2x - 1, 3y + 2> has the point (1/2, -2/3).
    PolyIdeal frac{n, {x * Rational(2) - one, y * Rational(3) + one * Rational(2)}};
    auto fpt = rational_point(frac, {});
    REQUIRE(fpt.has_value());
    CHECK((*fpt)[0] == Rational(1, 2));
    CHECK((*fpt)[1] == Rational(-2, 3));

    // The zero ideal is satisfied by anything.
    CHECK(rational_point(PolyIdeal{n, {}}, {}).has_value());
}

TEST_CASE("univariate rational roots") {
    // (x - 2)(2x + 3) = 2x^2 - x - 6.
    auto roots = rational_roots_univariate({Rational(-6), Rational(-1), Rational(2)});
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == Rational(-3, 2));
    CHECK(roots[1] == Rational(2));
    // x^2 (x - 1): root at 0 and 1.
    auto r2 = rational_roots_univariate({Rational(0), Rational(0), Rational(-1), Rational(1)});
    REQUIRE(r2.size() == 2);
    CHECK(r2[0] == Rational(0));
    CHECK(r2[1] == Rational(1));
    // x^2 + 1: none.
    CHECK(rational_roots_univariate({Rational(1), Rational(0), Rational(1)}).empty());
    // Fractional coefficients: (x - 1/3)(x + 1) scaled by 1/6.
    auto r3 = rational_roots_univariate(
        {Rational(-1, 18), Rational(1, 9), Rational(1, 6)});
    REQUIRE(r3.size() == 2);
    CHECK(r3[0] == Rational(-1));
    CHECK(r3[1] == Rational(1, 3));
}

TEST_CASE("groebner budget exhaustion") {
    std::size_t n = 2;
    MPoly x = MPoly::variable(n, 0), y = MPoly::variable(n, 1);
    GroebnerOptions tight;
    tight.spair_budget = 0;
    // Leading terms x^2 and x*y are not coprime, so a reduction is required
    // and the zero budget trips.
    PolyIdeal ideal{n, {x * x + y, x * y + MPoly(n, Rational(1))}};
    CHECK_THROWS_AS(groebner(ideal, tight), defo::ResourceError);
}
