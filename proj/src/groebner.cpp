#include "defo/groebner.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace defo::exactalg {

namespace {

// Full reduction of f by the set g: every term of the remainder is
// irreducible by every leading term in g.
MPoly reduce_full(const MPoly& f, const std::vector<MPoly>& g, MonomialOrder ord) {
    MPoly rem = f;
    MPoly out(f.nvars());
    std::vector<std::pair<Expo, Rational>> lts;
    lts.reserve(g.size());
    for (const auto& p : g) lts.push_back(p.leading_term(ord));
    while (!rem.is_zero()) {
        auto [e, c] = rem.leading_term(ord);
        bool reduced = false;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!monomial_divides(lts[i].first, e)) continue;
            MPoly q = MPoly::monomial(monomial_quotient(e, lts[i].first), c / lts[i].second);
            rem -= q * g[i];
            reduced = true;
            break;
        }
        if (!reduced) {
            MPoly t = MPoly::monomial(e, c);
            out += t;
            rem -= t;
        }
    }
    return out;
}

MPoly s_poly(const MPoly& f, const MPoly& g, MonomialOrder ord) {
    auto [ef, cf] = f.leading_term(ord);
    auto [eg, cg] = g.leading_term(ord);
    Expo l = monomial_lcm(ef, eg);
    MPoly a = MPoly::monomial(monomial_quotient(l, ef), Rational(1) / cf);
    MPoly b = MPoly::monomial(monomial_quotient(l, eg), Rational(1) / cg);
    return a * f - b * g;
}

bool coprime(const Expo& a, const Expo& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

} // namespace

MPoly normal_form(const MPoly& f, const std::vector<MPoly>& g, MonomialOrder ord) {
    if (g.empty()) return f;
    return reduce_full(f, g, ord);
}

std::vector<MPoly> groebner(const PolyIdeal& ideal, const GroebnerOptions& opt) {
    const MonomialOrder ord = opt.order;
    std::vector<MPoly> basis;
    for (const auto& p : ideal.gens)
        if (!p.is_zero()) basis.push_back(p);
    if (basis.empty()) return {};
    for (const auto& p : basis)
        if (p.nvars() != ideal.nvars) throw InputError("ideal generator arity mismatch");

    // Pair queue with the normal selection strategy (smallest lcm degree).
    struct Pair { std::size_t i, j; Expo lcm; };
    auto add_pairs = [&](std::vector<Pair>& pairs, std::size_t j) {
        for (std::size_t i = 0; i < j; ++i) {
            Pair p{i, j, monomial_lcm(basis[i].leading_term(ord).first,
                                       basis[j].leading_term(ord).first)};
            pairs.push_back(std::move(p));
        }
    };
    std::vector<Pair> pairs;
    for (std::size_t j = 1; j < basis.size(); ++j) add_pairs(pairs, j);

    std::set<std::pair<std::size_t, std::size_t>> done;
    std::size_t budget = opt.spair_budget;
    while (!pairs.empty()) {
        auto best = std::min_element(pairs.begin(), pairs.end(),
                                     [&](const Pair& a, const Pair& b) {
                                         if (total_degree(a.lcm) != total_degree(b.lcm))
                                             return total_degree(a.lcm) < total_degree(b.lcm);
                                         return monomial_less(a.lcm, b.lcm, ord);
                                     });
        Pair cur = *best;
        pairs.erase(best);
        done.insert({cur.i, cur.j});

        const Expo& lti = basis[cur.i].leading_term(ord).first;
        const Expo& ltj = basis[cur.j].leading_term(ord).first;
        if (coprime(lti, ltj)) continue;  // Buchberger's first criterion
        // Chain criterion: some k with lt(k) | lcm(i,j) and both (i,k),
        // (k,j) already handled.
        bool skip = false;
        for (std::size_t k = 0; k < basis.size() && !skip; ++k) {
            if (k == cur.i || k == cur.j) continue;
            if (!monomial_divides(basis[k].leading_term(ord).first, cur.lcm)) continue;
            auto key = [&](std::size_t a, std::size_t b) {
                return std::make_pair(std::min(a, b), std::max(a, b));
            };
            if (done.count(key(cur.i, k)) && done.count(key(k, cur.j))) skip = true;
        }
        if (skip) continue;

        if (budget == 0)
            throw ResourceError("groebner: S-pair budget exhausted");
        --budget;

        MPoly r = reduce_full(s_poly(basis[cur.i], basis[cur.j], ord), basis, ord);
        if (r.is_zero()) continue;
        basis.push_back(r);
        add_pairs(pairs, basis.size() - 1);
    }

    // Minimalize: drop elements whose leading term is divisible by another's.
    std::vector<MPoly> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const Expo& e = basis[i].leading_term(ord).first;
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            const Expo& ej = basis[j].leading_term(ord).first;
            if (monomial_divides(ej, e) && (ej != e || j < i)) redundant = true;
        }
        if (!redundant) minimal.push_back(basis[i]);
    }
    // Inter-reduce and normalize to monic.
    std::vector<MPoly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<MPoly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        MPoly r = others.empty() ? minimal[i] : reduce_full(minimal[i], others, ord);
        if (r.is_zero()) continue;
        auto [e, c] = r.leading_term(ord);
        reduced.push_back(r * c.inverse());
    }
    std::sort(reduced.begin(), reduced.end(), [&](const MPoly& a, const MPoly& b) {
        return monomial_less(a.leading_term(ord).first, b.leading_term(ord).first, ord);
    });
    return reduced;
}

bool ideal_has_solution(const PolyIdeal& ideal, const GroebnerOptions& opt) {
    auto gb = groebner(ideal, opt);
    for (const auto& p : gb)
        if (p.is_constant() && !p.is_zero()) return false;
    return true;
}

bool is_zero_dimensional(const std::vector<MPoly>& basis, std::size_t nvars, MonomialOrder ord) {
    for (std::size_t v = 0; v < nvars; ++v) {
        bool found = false;
        for (const auto& p : basis) {
            const Expo& e = p.leading_term(ord).first;
            bool pure = e[v] > 0;
            for (std::size_t i = 0; i < nvars && pure; ++i)
                if (i != v && e[i] != 0) pure = false;
            if (pure) { found = true; break; }
        }
        if (!found) return false;
    }
    return true;
}

std::vector<Rational> rational_roots_univariate(const std::vector<Rational>& coeffs) {
    // Trim leading zeros.
    std::size_t deg = coeffs.size();
    while (deg > 0 && coeffs[deg - 1].is_zero()) --deg;
    std::vector<Rational> roots;
    if (deg == 0) return roots;  // zero or constant polynomial: no isolated roots reported
    std::vector<Rational> c(coeffs.begin(), coeffs.begin() + deg);
    // Factor out x^k.
    std::size_t low = 0;
    while (low < c.size() && c[low].is_zero()) ++low;
    if (low > 0) {
        roots.push_back(Rational(0));
        c.erase(c.begin(), c.begin() + low);
    }
    if (c.size() <= 1) return roots;
    // Clear denominators to integer coefficients.
    mpz_class den_lcm(1);
    for (const auto& r : c) {
        mpz_class d = r.raw().get_den();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
        den_lcm = den_lcm / g * d;
    }
    std::vector<mpz_class> ic;
    for (const auto& r : c) {
        mpq_class q = r.raw() * mpq_class(den_lcm);
        ic.push_back(q.get_num());
    }
    mpz_class a0 = abs(ic.front());
    mpz_class ad = abs(ic.back());
    auto divisors = [](const mpz_class& n) {
        std::vector<mpz_class> ds;
        if (n == 0) return ds;
        mpz_class i(1);
        std::size_t steps = 0;
        while (i * i <= n && steps < 2000000) {
            if (n % i == 0) {
                ds.push_back(i);
                mpz_class j = n / i;
                if (j != i) ds.push_back(j);
            }
            ++i;
            ++steps;
        }
        return ds;
    };
    std::set<Rational> seen;
    auto poly_at = [&](const Rational& x) {
        Rational acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    };
    for (const auto& p : divisors(a0))
        for (const auto& q : divisors(ad)) {
            Rational cand(mpq_class(p, q));
            for (int sign = 0; sign < 2; ++sign) {
                Rational x = sign ? -cand : cand;
                if (seen.count(x)) continue;
                seen.insert(x);
                if (poly_at(x).is_zero()) roots.push_back(x);
            }
        }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

// Recursive back-substitution over rational roots; vars are eliminated from
// the back (lex with x0 largest puts pure x_{n-1} polynomials in the basis).
std::optional<std::vector<Rational>> rational_point_rec(std::vector<MPoly> gens,
                                                        std::size_t nvars,
                                                        const GroebnerOptions& opt) {
    if (nvars == 0) {
        for (const auto& g : gens)
            if (!g.is_zero()) return std::nullopt;
        return std::vector<Rational>{};
    }
    PolyIdeal ideal{nvars, gens};
    GroebnerOptions lex_opt = opt;
    lex_opt.order = MonomialOrder::lex;
    auto gb = groebner(ideal, lex_opt);
    if (gb.empty()) {
        // Zero ideal: everything vanishes; pick zeros.
        return std::vector<Rational>(nvars, Rational(0));
    }
    for (const auto& p : gb)
        if (p.is_constant() && !p.is_zero()) return std::nullopt;
    // Find an element involving only the last variable.
    std::optional<std::vector<Rational>> uni;
    for (const auto& p : gb) {
        bool only_last = true;
        unsigned maxdeg = 0;
        for (const auto& [e, cc] : p.terms()) {
            for (std::size_t i = 0; i + 1 < nvars; ++i)
                if (e[i] != 0) { only_last = false; break; }
            if (!only_last) break;
            maxdeg = std::max(maxdeg, e[nvars - 1]);
        }
        if (!only_last) continue;
        std::vector<Rational> coeffs(maxdeg + 1, Rational(0));
        for (const auto& [e, cc] : p.terms()) coeffs[e[nvars - 1]] = cc;
        uni = coeffs;
        break;
    }
    if (!uni) return std::nullopt;  // not zero-dimensional in this variable
    for (const auto& root : rational_roots_univariate(*uni)) {
        // Substitute x_{n-1} = root, drop to n-1 variables.
        std::vector<MPoly> images;
        for (std::size_t i = 0; i + 1 < nvars; ++i)
            images.push_back(MPoly::variable(nvars - 1, i));
        images.push_back(MPoly(nvars - 1, root));
        std::vector<MPoly> next;
        for (const auto& g : gb) {
            MPoly s = g.substitute(images);
            if (!s.is_zero()) next.push_back(s);
        }
        auto sub = rational_point_rec(next, nvars - 1, opt);
        if (sub) {
            sub->push_back(root);
            return sub;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<std::vector<Rational>> rational_point(const PolyIdeal& ideal,
                                                    const GroebnerOptions& opt) {
    return rational_point_rec(ideal.gens, ideal.nvars, opt);
}

} // namespace defo::exactalg
