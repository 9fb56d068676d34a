#include "vasco/rational.hpp"

#include <cctype>

namespace vasco {

std::string rat_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string rat_to_fraction_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

std::optional<Rat> rat_from_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (!is_int(s)) return std::nullopt;
      return Rat(Int(s));
    }
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return std::nullopt;
    Int d(den);
    if (d == 0) return std::nullopt;
    return Rat(Int(num), d);
  } catch (...) {
    return std::nullopt;
  }
}

Int lcm_of_denominators(const std::vector<Rat>& v) {
  Int l = 1;
  for (const auto& r : v) l = lcm(l, Int(denominator(r)));
  return l;
}

std::vector<Int> scale_to_integers(const std::vector<Rat>& v) {
  Int l = lcm_of_denominators(v);
  std::vector<Int> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(Int(numerator(r)) * (l / Int(denominator(r))));
  return out;
}

}  // namespace vasco
