#include <cstdio>
#include <exception>

#include "defo/gen.hpp"
#include "defo/tw.hpp"

using namespace defo::tw;
using defo::Rational;
using defo::artin::make_dual_numbers;
using defo::dgla::CheckLevel;
using defo::dgla::Dgla;
using defo::exactalg::MPoly;
using defo::forms::PolyForm;
using defo::graded::GradedElement;
using defo::graded::GradedMap;
using defo::graded::GradedSpace;

static Rational R(long n, long d = 1) { return Rational(n, d); }

static Dgla end2() {
    GradedSpace V({{0, 1}, {1, 1}});
    defo::exactalg::Matrix m(1, 1);
    m.at(0, 0) = R(1);
    GradedMap dV(V, V, 1, {{0, m}});
    return defo::gen::end_dgla(V, dV, CheckLevel::none);
}

static ScDgla constant_sc(const Dgla& L, std::size_t M) {
    GradedMap id = GradedMap::identity(L.space());
    std::vector<Dgla> levels(M + 1, L);
    std::vector<std::vector<GradedMap>> cofaces;
    for (std::size_t n = 1; n <= M; ++n) {
        cofaces.emplace_back(n + 1, id);
    }
    return ScDgla(std::move(levels), std::move(cofaces));
}

// promote_form / random_compatible copied from the test helpers.
static FormElem promote_form(const FormElem& x, const std::vector<Rational>& mu) {
    const std::size_t r = mu.size();
    FormElem out(x.simplex_dim(), x.cap());
    for (const auto& [deg, slots] : x.components()) {
        std::vector<PolyForm> wide(slots.size() * r,
                                   PolyForm(x.simplex_dim(), x.cap()));
        for (std::size_t i = 0; i < slots.size(); ++i) {
            for (std::size_t e = 0; e < r; ++e) {
                if (mu[e].is_zero()) continue;
                wide[i * r + e] = slots[i].scaled(mu[e]);
            }
        }
        out.set_component(deg, std::move(wide));
    }
    return out;
}

static TWElement promote_tw(const TWElement& x, const std::vector<Rational>& mu) {
    TWElement out;
    for (const auto& lv : x.levels) out.levels.push_back(promote_form(lv, mu));
    return out;
}

static TotElement random_tot(const ScDgla& g, int j, defo::gen::Rng& rng) {
    TotElement y = tot_zero(g, j);
    for (std::size_t i = 0; i <= g.top_level(); ++i) {
        int q = j - static_cast<int>(i);
        std::size_t d = g.level(i).space().dim(q);
        if (d == 0) continue;
        defo::exactalg::Vec v(d, Rational(0));
        for (auto& c : v) c = rng.rational(2, 2);
        GradedElement e;
        e.set_component(q, std::move(v));
        y.levels[i] = std::move(e);
    }
    return y;
}

static TWElement random_compatible(const ScDgla& g, const defo::artin::ArtinAlgebra& A,
                                   unsigned cap, int j, defo::gen::Rng& rng) {
    TWElement s1 = whitney_map(g, cap, random_tot(g, j, rng));
    TWElement s2 = whitney_map(g, cap, random_tot(g, j, rng));
    return promote_tw(s1, defo::gen::random_m_vec(A, rng)) +
           promote_tw(s2, defo::gen::random_m_vec(A, rng));
}

int main() {
    Dgla L = end2();
    ScDgla g = constant_sc(L, 2);
    auto A = make_dual_numbers(3);
    const unsigned cap = 6;
    defo::gen::Rng rng(71);
    for (int rep = 0; rep < 10; ++rep) {
        TWElement a = random_compatible(g, A, cap, 0, rng);
        TWElement y = tw_gauge(g, A, a, tw_zero(g, cap));
        FormElem br1 = level_bracket(g.level(1), A, y.levels[1], y.levels[1]);
        FormElem br2 = level_bracket(g.level(2), A, y.levels[2], y.levels[2]);
        std::printf("rep %d: a1 degs:", rep);
        for (int d : a.levels[1].degrees()) std::printf(" %d", d);
        std::printf(" | y1 degs:");
        for (int d : y.levels[1].degrees()) std::printf(" %d", d);
        std::printf(" | [y1,y1] zero=%d [y2,y2] zero=%d\n", int(br1.is_zero()),
                    int(br2.is_zero()));
    }
    return 0;
}
