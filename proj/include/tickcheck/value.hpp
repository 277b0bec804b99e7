#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <variant>

#include "tickcheck/diag.hpp"

namespace tickcheck {

// Exact rational arithmetic; encodings never use floating point.
using Rational = mpq_class;

enum class ValueType { Bool, Int, Real };

std::string to_string(ValueType t);

// Runtime value of a signal or chart variable.
// Int is kept arbitrary-precision so simulator values always match the
// solver model bit for bit.
struct Value {
    std::variant<bool, mpz_class, Rational> v;

    Value() : v(mpz_class(0)) {}
    explicit Value(bool b) : v(b) {}
    explicit Value(long long i) : v(mpz_class(static_cast<long>(i))) {}
    explicit Value(mpz_class i) : v(std::move(i)) {}
    // mpq arithmetic assumes canonical operands, so normalize on entry
    explicit Value(Rational r) : v((r.canonicalize(), std::move(r))) {}

    ValueType type() const {
        switch (v.index()) {
            case 0: return ValueType::Bool;
            case 1: return ValueType::Int;
            default: return ValueType::Real;
        }
    }
    bool as_bool() const { return std::get<bool>(v); }
    const mpz_class& as_int() const { return std::get<mpz_class>(v); }
    const Rational& as_real() const { return std::get<Rational>(v); }

    // Numeric view with Int -> Real widening.
    Rational as_rational() const {
        if (v.index() == 1) return Rational(std::get<mpz_class>(v));
        return std::get<Rational>(v);
    }

    bool operator==(const Value& o) const;
};

// "2.5" -> 5/2, "-3" -> -3, "1/4" -> 1/4. Throws Error("BadNumber") otherwise.
Rational parse_rational(const std::string& text);

// Exact rendering: integral rationals as plain integers, otherwise p/q.
std::string rational_to_string(const Rational& r);

// SMT-LIB literal of the appropriate sort: Real constants become
// (/ p q) or p.0, negatives are wrapped in (- ...).
std::string smt_literal(const Value& v);
std::string smt_real_literal(const Rational& r);
std::string smt_int_literal(const mpz_class& i);

}  // namespace tickcheck
