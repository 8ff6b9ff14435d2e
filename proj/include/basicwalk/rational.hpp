#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace basicwalk {

// Exact rational, always reduced with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long num) : q_(num) {}
    Rational(long num, unsigned long den);
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    // "p/q" or "p"
    static Rational parse(std::string_view text);

    std::string str() const { return q_.get_str(); }
    std::string numerator() const { return q_.get_num().get_str(); }
    std::string denominator() const { return q_.get_den().get_str(); }
    bool is_integer() const { return q_.get_den() == 1; }
    double to_double() const { return q_.get_d(); }
    const mpq_class& raw() const noexcept { return q_; }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    static Rational pow(const Rational& base, std::uint64_t exp);

private:
    mpq_class q_{0};
};

inline Rational operator""_q(unsigned long long n) { return Rational(static_cast<long>(n)); }

}  // namespace basicwalk
