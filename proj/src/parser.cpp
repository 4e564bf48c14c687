#include "hessian_atlas/parser.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cstdio>
#include <map>

#include "hessian_atlas/errors.hpp"

namespace hatlas {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using ExactPoly = std::map<Exponent2, cpp_rational>;

constexpr int kMaxParsedDegree = TrivariateHomogeneous::kMaxDegree;

int degree_of(const ExactPoly& p) {
  int d = 0;
  for (const auto& [e, c] : p) d = std::max(d, e[0] + e[1]);
  return d;
}

void normalize(ExactPoly& p) { std::erase_if(p, [](const auto& kv) { return kv.second == 0; }); }

ExactPoly add(ExactPoly a, const ExactPoly& b, int sign) {
  for (const auto& [e, c] : b) a[e] += sign * c;
  normalize(a);
  return a;
}

ExactPoly mul(const ExactPoly& a, const ExactPoly& b) {
  ExactPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) out[{ea[0] + eb[0], ea[1] + eb[1]}] += ca * cb;
  normalize(out);
  return out;
}

cpp_int digits_to_int(const std::string& s) {
  std::size_t i = 0;
  while (i + 1 < s.size() && s[i] == '0') ++i;  // a leading zero would select octal
  return cpp_int(s.substr(i));
}

cpp_rational pow10(long e) {
  cpp_int p = 1;
  for (long i = 0; i < std::abs(e); ++i) p *= 10;
  return e >= 0 ? cpp_rational(p) : cpp_rational(cpp_int(1), p);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ExactPoly parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail("empty expression");
    ExactPoly p = expr();
    skip_ws();
    if (pos_ < s_.size()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, static_cast<int>(at) + 1);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExactPoly expr() {
    ExactPoly acc = term();
    while (true) {
      const char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      acc = add(std::move(acc), term(), c == '+' ? 1 : -1);
    }
  }

  bool starts_factor(char c) const {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  ExactPoly term() {
    ExactPoly acc = unary();
    while (true) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        acc = mul(acc, unary());
      } else if (c == '/') {
        const std::size_t at = pos_++;
        ExactPoly d = unary();
        if (degree_of(d) != 0 || d.empty()) fail_at("division by a non-constant or zero expression", at);
        const cpp_rational inv = 1 / d.begin()->second;
        for (auto& [e, v] : acc) v *= inv;
      } else if (starts_factor(c)) {
        acc = mul(acc, power());
      } else {
        return acc;
      }
      check_degree(acc);
    }
  }

  ExactPoly unary() {
    const char c = peek();
    if (c == '+' || c == '-') {
      ++pos_;
      ExactPoly p = unary();
      if (c == '-')
        for (auto& [e, v] : p) v = -v;
      return p;
    }
    return power();
  }

  ExactPoly power() {
    ExactPoly base = atom();
    if (peek() != '^') return base;
    const std::size_t at = pos_++;
    ExactPoly ex = unary();
    cpp_rational value = 0;
    if (!ex.empty()) {
      if (degree_of(ex) != 0) fail_at("exponent not a nonnegative integer", at + 1);
      value = ex.begin()->second;
    }
    if (value < 0 || denominator(value) != 1) fail_at("exponent not a nonnegative integer", at + 1);
    if (value > kMaxParsedDegree) fail_at("exponent too large", at + 1);
    const int k = static_cast<int>(numerator(value));
    ExactPoly out{{{0, 0}, 1}};
    for (int i = 0; i < k; ++i) {
      out = mul(out, base);
      check_degree(out, at);
    }
    return out;
  }

  void check_degree(const ExactPoly& p, std::size_t at = std::string_view::npos) const {
    if (degree_of(p) > kMaxParsedDegree)
      fail_at("degree exceeds " + std::to_string(kMaxParsedDegree), at == std::string_view::npos ? pos_ : at);
  }

  ExactPoly atom() {
    const char c = peek();
    if (c == '(') {
      const std::size_t open = pos_++;
      ExactPoly p = expr();
      if (peek() != ')') fail_at("unbalanced parenthesis", open);
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return {{{0, 0}, number()}};
    if (std::isalpha(static_cast<unsigned char>(c))) return variables();
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  // A run of letters made only of x and y is a product of variables.
  ExactPoly variables() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
    const std::string_view word = s_.substr(start, end - start);
    Exponent2 e{0, 0};
    for (char ch : word) {
      if (ch == 'x') ++e[0];
      else if (ch == 'y') ++e[1];
      else fail_at("unknown identifier '" + std::string(word) + "'", start);
    }
    // only the last variable may carry an exponent; split the run so that
    // "xy^2" reads as x * y^2
    if (word.size() > 1) {
      pos_ = end - 1;
      Exponent2 head = e;
      --head[word.back() == 'x' ? 0 : 1];
      return {{head, 1}};
    }
    pos_ = end;
    return {{e, 1}};
  }

  cpp_rational number() {
    const std::size_t start = pos_;
    std::string int_part, frac_part;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) int_part += s_[pos_++];
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) frac_part += s_[pos_++];
    }
    if (int_part.empty() && frac_part.empty()) fail_at("malformed number", start);
    long exp10 = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      int sign = 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) sign = s_[q++] == '-' ? -1 : 1;
      std::string digits;
      while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) digits += s_[q++];
      if (!digits.empty()) {
        if (digits.size() > 4) fail_at("exponent out of range", pos_);
        exp10 = sign * std::stol(digits);
        pos_ = q;
      }
    }
    const std::string all = (int_part.empty() ? "0" : int_part) + frac_part;
    return cpp_rational(digits_to_int(all)) * pow10(exp10 - static_cast<long>(frac_part.size()));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

BivariatePolynomial parse_polynomial(std::string_view text) {
  const ExactPoly exact = Parser(text).parse();
  BivariatePolynomial::Coefficients c;
  for (const auto& [e, v] : exact) c[e] = v.convert_to<double>();
  return BivariatePolynomial(std::move(c));
}

std::string to_string(const BivariatePolynomial& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Exponent2, double>> terms(p.coeffs().begin(), p.coeffs().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const int da = a.first[0] + a.first[1], db = b.first[0] + b.first[1];
    if (da != db) return da > db;
    return a.first[0] > b.first[0];
  });
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const double mag = std::abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    auto var = [&](const char* v, int k) {
      if (k == 0) return;
      if (!mono.empty()) mono += "*";
      mono += v;
      if (k > 1) mono += "^" + std::to_string(k);
    };
    var("x", e[0]);
    var("y", e[1]);
    if (mag != 1.0 || mono.empty()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", mag);
      out += buf;
      if (!mono.empty()) out += "*";
    }
    out += mono;
  }
  return out;
}

}  // namespace hatlas
