#include "defo/rational.hpp"

#include <cctype>
#include <ostream>

namespace defo::exactalg {

Rational::Rational(long num, long den) {
    if (den == 0) throw InputError("rational with zero denominator");
    q_ = mpq_class(num, den);
    canon();
}

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw InputError("empty rational literal");
    // Validate shape before handing to GMP: optional sign, digits,
    // optionally "/" digits.
    auto check_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!check_int(s)) throw InputError("bad rational literal: " + s);
        return Rational(mpq_class(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!check_int(num) || !check_int(den))
        throw InputError("bad rational literal: " + s);
    mpq_class q(s);
    if (sgn(q.get_den()) == 0) throw InputError("rational with zero denominator: " + s);
    q.canonicalize();
    return Rational(q);
}

Rational Rational::factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(mpq_class(f));
}

Rational Rational::binomial(unsigned n, unsigned k) {
    if (k > n) return Rational(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rational(mpq_class(b));
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw MathCheckError("division by zero rational");
    q_ /= o.q_;
    return *this;
}

Rational Rational::inverse() const {
    if (is_zero()) throw MathCheckError("inverse of zero rational");
    return Rational(mpq_class(1) / q_);
}

Rational Rational::pow(unsigned e) const {
    Rational r(1);
    Rational base = *this;
    while (e > 0) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

std::string Rational::str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

} // namespace defo::exactalg
