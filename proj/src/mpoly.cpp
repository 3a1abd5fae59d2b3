#include "defo/mpoly.hpp"

#include <algorithm>
#include <sstream>

namespace defo::exactalg {

unsigned total_degree(const Expo& e) {
    unsigned d = 0;
    for (auto x : e) d += x;
    return d;
}

bool monomial_less(const Expo& a, const Expo& b, MonomialOrder ord) {
    if (a.size() != b.size()) throw InputError("monomial compare: nvars mismatch");
    switch (ord) {
    case MonomialOrder::lex:
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    case MonomialOrder::grevlex: {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        // Graded reverse lex: a < b when the LAST nonzero entry of a - b
        // is positive.
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i]) return a[i] > b[i];
        }
        return false;
    }
    }
    return false;
}

bool monomial_divides(const Expo& a, const Expo& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Expo monomial_quotient(const Expo& b, const Expo& a) {
    Expo q(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (a[i] > b[i]) throw MathCheckError("monomial quotient not divisible");
        q[i] = b[i] - a[i];
    }
    return q;
}

Expo monomial_lcm(const Expo& a, const Expo& b) {
    Expo l(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) l[i] = std::max(a[i], b[i]);
    return l;
}

MPoly::MPoly(std::size_t nvars, const Rational& c) : nvars_(nvars) {
    if (!c.is_zero()) terms_[Expo(nvars, 0)] = c;
}

MPoly MPoly::variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw InputError("variable index out of range");
    MPoly p(nvars);
    Expo e(nvars, 0);
    e[i] = 1;
    p.terms_[e] = Rational(1);
    return p;
}

MPoly MPoly::monomial(const Expo& e, const Rational& c) {
    MPoly p(e.size());
    if (!c.is_zero()) p.terms_[e] = c;
    return p;
}

bool MPoly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
}

Rational MPoly::constant_term() const {
    auto it = terms_.find(Expo(nvars_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
}

unsigned MPoly::degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

void MPoly::add_term(const Expo& e, const Rational& c) {
    if (e.size() != nvars_) throw InputError("add_term: exponent arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_[e] = c;
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MPoly MPoly::operator-() const {
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
    if (nvars_ == 0 && terms_.empty()) nvars_ = o.nvars_;
    if (o.terms_.empty()) return *this;
    if (nvars_ != o.nvars_) throw InputError("polynomial sum: nvars mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
    if (nvars_ == 0 && terms_.empty()) nvars_ = o.nvars_;
    if (o.terms_.empty()) return *this;
    if (nvars_ != o.nvars_) throw InputError("polynomial difference: nvars mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

MPoly MPoly::operator*(const MPoly& o) const {
    if (terms_.empty() || o.terms_.empty()) return MPoly(std::max(nvars_, o.nvars_));
    if (nvars_ != o.nvars_) throw InputError("polynomial product: nvars mismatch");
    MPoly r(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            Expo e(nvars_);
            for (std::size_t i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

MPoly MPoly::operator*(const Rational& c) const {
    MPoly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
    return r;
}

MPoly MPoly::pow(unsigned e) const {
    MPoly r(nvars_, Rational(1));
    MPoly base = *this;
    while (e > 0) {
        if (e & 1u) r = r * base;
        base = base * base;
        e >>= 1u;
    }
    return r;
}

std::pair<Expo, Rational> MPoly::leading_term(MonomialOrder ord) const {
    if (terms_.empty()) throw MathCheckError("leading term of zero polynomial");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
        if (monomial_less(best->first, it->first, ord)) best = it;
    return {best->first, best->second};
}

Rational MPoly::eval(const std::vector<Rational>& point) const {
    if (point.size() != nvars_) throw InputError("eval arity mismatch");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] != 0) t *= point[i].pow(e[i]);
        acc += t;
    }
    return acc;
}

MPoly MPoly::substitute(const std::vector<MPoly>& images) const {
    if (images.size() != nvars_) throw InputError("substitute arity mismatch");
    std::size_t out_vars = images.empty() ? 0 : images[0].nvars();
    for (const auto& im : images)
        if (im.nvars() != out_vars) throw InputError("substitute: inconsistent image arity");
    MPoly acc(out_vars);
    for (const auto& [e, c] : terms_) {
        MPoly t(out_vars, c);
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] != 0) t = t * images[i].pow(e[i]);
        acc += t;
    }
    return acc;
}

MPoly MPoly::exact_divide(const MPoly& divisor) const {
    if (divisor.is_zero()) throw MathCheckError("exact division by zero polynomial");
    if (is_zero()) return MPoly(nvars_);
    if (nvars_ != divisor.nvars_) throw InputError("exact division: nvars mismatch");
    const MonomialOrder ord = MonomialOrder::grevlex;
    auto [lde, ldc] = divisor.leading_term(ord);
    MPoly rem = *this;
    MPoly quot(nvars_);
    while (!rem.is_zero()) {
        auto [lre, lrc] = rem.leading_term(ord);
        if (!monomial_divides(lde, lre))
            throw NotDivisible("polynomial division leaves a remainder");
        Expo qe = monomial_quotient(lre, lde);
        Rational qc = lrc / ldc;
        MPoly qt = MPoly::monomial(qe, qc);
        quot += qt;
        rem -= qt * divisor;
    }
    return quot;
}

MPoly MPoly::derivative(std::size_t i) const {
    if (i >= nvars_) throw InputError("derivative variable out of range");
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Expo d = e;
        d[i] -= 1;
        r.add_term(d, c * Rational(static_cast<long>(e[i])));
    }
    return r;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            os << "*";
            if (i < names.size()) os << names[i];
            else os << "x" << i;
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

} // namespace defo::exactalg
