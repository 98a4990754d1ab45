#include "xscore/rational.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace xscore {

BigInt binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i; // exact at every step
    }
    return r;
}

BigInt factorial(long long n) {
    BigInt r = 1;
    for (long long i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt pow2(long long e) {
    BigInt r = 1;
    return r << e;
}

std::string to_string(const BigInt& n) {
    return n.str();
}

std::string to_fraction_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational rational_from_string(std::string_view s) {
    auto is_int = [](std::string_view t) {
        if (t.empty()) return false;
        size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            if (!is_int(s)) throw ParseError("not a rational: '" + std::string(s) + "'");
            return Rational(BigInt(std::string(s)));
        }
        std::string_view num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) throw ParseError("not a rational: '" + std::string(s) + "'");
        BigInt q{std::string(den)};
        if (q == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
        return Rational(BigInt(std::string(num)), q);
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad rational: ") + e.what());
    }
}

std::string approx_decimal(const Rational& r) {
    double d = r.convert_to<double>();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", d);
    return buf;
}

} // namespace xscore
