// Exact rational arithmetic.
//
// Thin value wrapper around GMP's mpq_class.  Invariants (reduced form,
// positive denominator) are maintained by mpq canonicalization.  The whole
// library computes over Q; no floating point appears anywhere.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "defo/errors.hpp"

namespace defo::exactalg {

class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(static_cast<long>(n)) {}
    Rational(int n) : q_(static_cast<long>(n)) {}
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : q_(q) { canon(); }

    // Parses "p", "-p", or "p/q".  Throws InputError on junk or q == 0.
    static Rational parse(const std::string& s);

    static Rational factorial(unsigned n);

    // binomial(n, k); 0 when k > n.
    static Rational binomial(unsigned n, unsigned k);

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    int sign() const { return sgn(q_); }

    Rational inverse() const;
    Rational pow(unsigned e) const;
    Rational abs() const { return Rational(mpq_class(::abs(q_))); }

    // Canonical text form: "p" for integers, "p/q" otherwise.
    std::string str() const;

    const mpq_class& raw() const { return q_; }

private:
    void canon() { q_.canonicalize(); }
    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace defo::exactalg

namespace defo {
using exactalg::Rational;
}
