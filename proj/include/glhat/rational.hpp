#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace glhat {

// Exact rational coefficients. GMP keeps the straightening sums and the
// polynomial gcd chains from ever overflowing.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "p/q" or a decimal-free integer string. Throws on bad input.
Rat rat_from_string(const std::string& text);

std::string to_string(const Rat& r);

}  // namespace glhat
