#include "csw/rational.hpp"

#include <cctype>

#include "csw/error.hpp"

namespace csw {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::ConstraintViolation: return "ConstraintViolation";
        case ErrorCode::NotInScheme: return "NotInScheme";
        case ErrorCode::RankZero: return "RankZero";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NotDelta: return "NotDelta";
        case ErrorCode::PatternOutOfRange: return "PatternOutOfRange";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotInSpan: return "NotInSpan";
        case ErrorCode::HomeMismatch: return "HomeMismatch";
        case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorCode::EmptyFamily: return "EmptyFamily";
        case ErrorCode::WrongSpaceKind: return "WrongSpaceKind";
        case ErrorCode::CaptureUnavailable: return "CaptureUnavailable";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::NotBiorthogonal: return "NotBiorthogonal";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Rational make_rational(long num, long den) {
    if (den == 0) throw Error(ErrorCode::Parse, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    const auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
        throw Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'");
    }
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10);
    mpz_class d(den, 10);
    if (d == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational inverse_power(const Rational& base, int exponent) {
    Rational out = 1;
    for (int i = 0; i < exponent; ++i) out /= base;
    return out;
}

}  // namespace csw
