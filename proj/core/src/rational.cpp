#include "polyprophet/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace polyprophet {

namespace {

int64_t parse_int(const std::string& s, const std::string& context) {
  if (s.empty()) throw ValidationError("empty integer in rational: " + context);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("bad integer '" + s + "' in rational: " + context);
  }
  if (pos != s.size()) {
    throw ValidationError("trailing characters in rational: " + context);
  }
  return v;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw ValidationError("empty rational");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(parse_int(text.substr(0, slash), text),
                    parse_int(text.substr(slash + 1), text));
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    return Rational::integer(parse_int(text, text));
  }
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  if (frac.size() > 18) throw ValidationError("decimal too long: " + text);
  for (char c : frac) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ValidationError("bad decimal '" + text + "'");
    }
  }
  int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const bool negative = !whole.empty() && whole[0] == '-';
  int64_t whole_v = whole.empty() || whole == "-" ? 0 : parse_int(whole, text);
  int64_t frac_v = frac.empty() ? 0 : parse_int(frac, text);
  int64_t num = (negative ? -1 : 1) * ((negative ? -whole_v : whole_v) * den + frac_v);
  return Rational(num, den);
}

int64_t lcm_checked(int64_t a, int64_t b) {
  if (a <= 0 || b <= 0) throw ValidationError("lcm of non-positive values");
  const int64_t g = std::gcd(a, b);
  const int64_t q = a / g;
  if (q > (int64_t{1} << 62) / b) throw TooLarge("denominator lcm overflow");
  return q * b;
}

}  // namespace polyprophet
