#include "basicwalk/rational.hpp"

#include "basicwalk/error.hpp"

namespace basicwalk {

Rational::Rational(long num, unsigned long den) {
    if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    mpq_class q;
    const std::string s(text);
    if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw Error(ErrorCode::parse_error, "not a rational: '" + s + "'");
    q.canonicalize();
    return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.q_ == 0) throw Error(ErrorCode::invalid_argument, "division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::pow(const Rational& base, std::uint64_t exp) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.q_.get_num_mpz_t(), exp);
    mpz_pow_ui(den.get_mpz_t(), base.q_.get_den_mpz_t(), exp);
    return Rational(mpq_class(num, den));
}

}  // namespace basicwalk
