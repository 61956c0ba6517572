#include "mcast/rational.hpp"

#include <cstdlib>

namespace mcast {

namespace {

long long parse_ll(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  std::size_t pos = 0;
  long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long num = parse_ll(text.substr(0, slash));
    long long den = parse_ll(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string frac = text.substr(dot + 1);
    if (frac.empty()) throw std::invalid_argument("bad decimal: " + text);
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) {
      if (den > 1000000000000000LL)
        throw std::invalid_argument("too many decimal digits: " + text);
      den *= 10;
    }
    std::string whole = text.substr(0, dot);
    bool neg = !whole.empty() && whole[0] == '-';
    long long w = (whole.empty() || whole == "-" || whole == "+")
                      ? 0
                      : parse_ll(whole);
    long long f = parse_ll(frac);
    if (f < 0) throw std::invalid_argument("bad decimal: " + text);
    Rational r(std::abs(w), 1);
    r += Rational(f, den);
    return neg || w < 0 ? -r : r;
  }
  return Rational(parse_ll(text), 1);
}

std::string format_exact(const Rational& r) {
  long long den = r.denominator();  // boost keeps it positive and reduced
  long long twos_fives = den;
  while (twos_fives % 2 == 0) twos_fives /= 2;
  while (twos_fives % 5 == 0) twos_fives /= 5;
  if (twos_fives != 1)
    return std::to_string(r.numerator()) + "/" + std::to_string(den);
  if (den == 1) return std::to_string(r.numerator());

  long long num = r.numerator();
  bool neg = num < 0;
  unsigned long long n = neg ? -static_cast<unsigned long long>(num) : num;
  std::string out = (neg ? "-" : "") + std::to_string(n / den) + ".";
  unsigned long long rem = n % den;
  while (rem != 0) {
    rem *= 10;
    out += static_cast<char>('0' + rem / den);
    rem %= den;
  }
  return out;
}

std::string format_decimal(const Rational& r, int digits) {
  long long num = r.numerator();
  long long den = r.denominator();
  bool neg = num < 0;
  unsigned long long n = neg ? -static_cast<unsigned long long>(num) : num;
  unsigned long long d = den;

  std::string out = std::to_string(n / d);
  unsigned long long rem = n % d;
  if (digits > 0) {
    out += '.';
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      out += static_cast<char>('0' + rem / d);
      rem %= d;
    }
  }
  // round half-up on the first dropped digit
  rem *= 10;
  if (rem / d >= 5) {
    for (int i = static_cast<int>(out.size()) - 1; i >= 0; --i) {
      if (out[i] == '.') continue;
      if (out[i] != '9') {
        ++out[i];
        break;
      }
      out[i] = '0';
      if (i == 0) out.insert(out.begin(), '1');
    }
  }
  return (neg && out.find_first_not_of("0.") != std::string::npos ? "-" : "") +
         out;
}

}  // namespace mcast
