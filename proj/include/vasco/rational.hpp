#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace vasco {

// Exact arithmetic everywhere in the analysis path. cpp_rational keeps values
// reduced with a positive denominator, which is exactly the invariant the
// model format and the solvers rely on.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// "a" for integers, "a/b" otherwise.
std::string rat_to_string(const Rat& r);

// Always "a/b", including "1/1". Used by the canonical model serializer so
// probabilities round-trip byte for byte.
std::string rat_to_fraction_string(const Rat& r);

// Accepts "a" or "a/b" with optional sign; rejects b == 0 and garbage.
std::optional<Rat> rat_from_string(const std::string& s);

Int lcm_of_denominators(const std::vector<Rat>& v);

// Multiply by the least common multiple of the denominators: the smallest
// positive scalar that makes every entry integral.
std::vector<Int> scale_to_integers(const std::vector<Rat>& v);

}  // namespace vasco
