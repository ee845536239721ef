#include "predlab/real.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace predlab {

Real Real::parse(std::string_view text, Bits bits)
{
    Real r(bits);
    const std::string s(text);
    char* end = nullptr;
    if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (s.empty() || end == s.c_str() || *end != '\0')
        throw std::invalid_argument("not a decimal number: '" + s + "'");
    return r;
}

double Real::log_double() const
{
    if (mpfr_sgn(v_) <= 0) return mpfr_zero_p(v_) ? -INFINITY : NAN;
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log(m) + static_cast<double>(e) * 0.69314718055994530942;
}

std::string Real::to_string(int digits) const
{
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    const int n = mpfr_snprintf(nullptr, 0, "%.*Rg", digits, v_);
    std::vector<char> buf(static_cast<std::size_t>(n) + 1);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return {buf.data()};
}

}  // namespace predlab
