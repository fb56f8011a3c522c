#include "ulab/numeric.hpp"

#include "ulab/errors.hpp"

#include <array>
#include <charconv>
#include <cctype>

namespace ulab {

Rational parse_rational(const std::string& text) {
  auto is_integer = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!is_integer(num) || !is_integer(den) || den[0] == '-' || den[0] == '+')
    throw ConfigError("malformed rational '" + text + "'");
  boost::multiprecision::cpp_int n(num[0] == '+' ? num.substr(1) : num);
  boost::multiprecision::cpp_int d(den);
  if (d == 0) throw ConfigError("rational '" + text + "' has zero denominator");
  return Rational(n, d);
}

std::string format_rational(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

}  // namespace ulab
