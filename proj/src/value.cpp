#include "tickcheck/value.hpp"

#include <sstream>

namespace tickcheck {

std::string to_string(ValueType t) {
    switch (t) {
        case ValueType::Bool: return "Bool";
        case ValueType::Int: return "Int";
        default: return "Real";
    }
}

bool Value::operator==(const Value& o) const {
    if (v.index() == 0 || o.v.index() == 0)
        return v.index() == 0 && o.v.index() == 0 && std::get<bool>(v) == std::get<bool>(o.v);
    // Numeric comparison widens Int to Real so 1 == 1.0.
    return as_rational() == o.as_rational();
}

Rational parse_rational(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw Error("BadNumber", "empty numeric literal");
    bool neg = false;
    size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = s[pos] == '-';
        ++pos;
    }
    std::string intpart, fracpart, denpart;
    bool seen_dot = false, seen_slash = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c == '.') {
            if (seen_dot || seen_slash) throw Error("BadNumber", "malformed number: " + text);
            seen_dot = true;
        } else if (c == '/') {
            if (seen_dot || seen_slash) throw Error("BadNumber", "malformed number: " + text);
            seen_slash = true;
        } else if (c >= '0' && c <= '9') {
            (seen_slash ? denpart : (seen_dot ? fracpart : intpart)).push_back(c);
        } else {
            throw Error("BadNumber", "malformed number: " + text);
        }
    }
    if (intpart.empty() && fracpart.empty()) throw Error("BadNumber", "malformed number: " + text);
    if (seen_slash && denpart.empty()) throw Error("BadNumber", "malformed number: " + text);
    mpz_class num(intpart.empty() ? "0" : intpart);
    Rational r(num);
    if (seen_dot && !fracpart.empty()) {
        mpz_class f(fracpart);
        mpz_class den(1);
        for (size_t i = 0; i < fracpart.size(); ++i) den *= 10;
        r += Rational(f, den);
    }
    if (seen_slash) {
        mpz_class den(denpart);
        if (den == 0) throw Error("BadNumber", "zero denominator: " + text);
        r /= Rational(den);
    }
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    if (r.get_den() == 1) {
        os << r.get_num();
    } else {
        os << r.get_num() << "/" << r.get_den();
    }
    return os.str();
}

std::string smt_int_literal(const mpz_class& i) {
    std::ostringstream os;
    if (i < 0) {
        os << "(- " << -i << ")";
    } else {
        os << i;
    }
    return os.str();
}

std::string smt_real_literal(const Rational& r) {
    Rational a = r;
    a.canonicalize();
    bool neg = a < 0;
    if (neg) a = -a;
    std::ostringstream os;
    if (a.get_den() == 1) {
        os << a.get_num() << ".0";
    } else {
        os << "(/ " << a.get_num() << ".0 " << a.get_den() << ".0)";
    }
    std::string body = os.str();
    if (neg) return "(- " + body + ")";
    return body;
}

std::string smt_literal(const Value& v) {
    switch (v.type()) {
        case ValueType::Bool: return v.as_bool() ? "true" : "false";
        case ValueType::Int: return smt_int_literal(v.as_int());
        default: return smt_real_literal(v.as_real());
    }
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
    std::ostringstream os;
    for (const auto& d : diags) {
        os << (d.severity == Severity::Error ? "error" : "warning") << "[" << d.code << "] "
           << d.span.line << ":" << d.span.column << ": " << d.message << "\n";
    }
    return os.str();
}

}  // namespace tickcheck
