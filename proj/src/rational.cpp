#include "qdburst/rational.hpp"

#include <cctype>
#include <limits>

#include "qdburst/errors.hpp"

namespace qdburst {

namespace {

bool is_integer_literal(std::string_view text) {
    if (text.empty()) return false;
    std::size_t start = (text.front() == '-' || text.front() == '+') ? 1 : 0;
    if (start == text.size()) return false;
    for (std::size_t i = start; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    }
    return true;
}

BigInt parse_integer(std::string_view text, std::string_view whole) {
    if (!is_integer_literal(text)) {
        fail(ErrorKind::InvalidSpec, "malformed rational '" + std::string(whole) + "'");
    }
    if (text.front() == '+') text.remove_prefix(1);
    return BigInt(std::string(text), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

    const auto slash = text.find('/');
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = 1;
    if (slash != std::string_view::npos) {
        den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) fail(ErrorKind::InvalidSpec, "zero denominator in '" + std::string(text) + "'");
    }
    Rational out(num, den);
    out.canonicalize();
    return out;
}

std::string format_rational(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) fail(ErrorKind::InvalidArg, "zero denominator");
    Rational out(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
    out.canonicalize();
    return out;
}

Rational ratio(const BigInt& num, const BigInt& den) {
    if (den == 0) fail(ErrorKind::InvalidArg, "zero denominator");
    Rational out(num, den);
    out.canonicalize();
    return out;
}

BigInt floor_of(const Rational& value) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return out;
}

BigInt ceil_of(const Rational& value) {
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return out;
}

Rational rational_gcd(std::span<const Rational> values) {
    if (values.empty()) fail(ErrorKind::InvalidArg, "gcd of an empty list");
    BigInt num = 0;
    BigInt den = 1;
    for (const auto& v : values) {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), v.get_num_mpz_t());
        num = g;
        BigInt l;
        mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
        den = l;
    }
    Rational out(num, den);
    out.canonicalize();
    return out;
}

Rational rational_lcm(std::span<const Rational> values) {
    if (values.empty()) fail(ErrorKind::InvalidArg, "lcm of an empty list");
    BigInt num = 1;
    BigInt den = 0;
    for (const auto& v : values) {
        if (sgn(v) <= 0) fail(ErrorKind::InvalidArg, "lcm requires positive values");
        BigInt l;
        mpz_lcm(l.get_mpz_t(), num.get_mpz_t(), v.get_num_mpz_t());
        num = l;
        BigInt g;
        mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
        den = g;
    }
    Rational out(num, den);
    out.canonicalize();
    return out;
}

std::int64_t to_int64(const BigInt& value) {
    if (!value.fits_slong_p()) fail(ErrorKind::InvalidArg, "integer out of range: " + value.get_str());
    return static_cast<std::int64_t>(value.get_si());
}

}  // namespace qdburst
