#include "bramble/polynomial.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <mutex>
#include <sstream>

namespace bramble {

std::shared_ptr<const std::vector<MultiIndex>> monomial_basis(int n, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<MultiIndex>>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{n, degree}];
  if (!slot) slot = std::make_shared<const std::vector<MultiIndex>>(enumerate_up_to(n, degree));
  return slot;
}

namespace {

class TermParser {
 public:
  TermParser(const std::string& text, int dimension) : text_(text), n_(dimension) {}

  Polynomiald parse() {
    std::vector<std::pair<MultiIndex, double>> terms;
    skip_space();
    if (at_end()) fail(Errc::invalid_argument, "empty polynomial expression");
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        skip_space();
      } else if (!first) {
        error("expected '+' or '-'");
      }
      terms.push_back(parse_term(sign));
      first = false;
      skip_space();
    }
    int degree = 0;
    for (const auto& [alpha, c] : terms) degree = std::max(degree, alpha.order());
    Polynomiald p(n_, degree);
    for (const auto& [alpha, c] : terms) p[alpha] += c;
    return p;
  }

 private:
  std::pair<MultiIndex, double> parse_term(double sign) {
    double coefficient = sign;
    std::vector<int> exponents(static_cast<std::size_t>(n_), 0);
    bool any = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coefficient *= parse_number();
      skip_space();
      if (peek() == '/') {
        ++pos_;
        skip_space();
        const double denominator = parse_number();
        if (denominator == 0.0) error("division by zero");
        coefficient /= denominator;
      }
      any = true;
    }
    for (;;) {
      skip_space();
      if (peek() == '*') {
        ++pos_;
        skip_space();
      }
      const char c = peek();
      if (c != 'x' && c != 'y' && c != 'z') break;
      const int axis = c - 'x';
      if (axis >= n_) error(std::string("variable '") + c + "' not available in dimension " + std::to_string(n_));
      ++pos_;
      int exponent = 1;
      skip_space();
      if (peek() == '^') {
        ++pos_;
        skip_space();
        exponent = static_cast<int>(parse_number());
        if (exponent < 0) error("negative exponent");
      }
      exponents[static_cast<std::size_t>(axis)] += exponent;
      any = true;
    }
    if (!any) error("expected a coefficient or a variable");
    return {MultiIndex(std::move(exponents)), coefficient};
  }

  double parse_number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) error("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void error(const std::string& what) const {
    fail(Errc::invalid_argument, "polynomial '" + text_ + "' at position " + std::to_string(pos_) + ": " + what);
  }

  const std::string& text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomiald parse_polynomial(const std::string& text, int dimension) {
  if (dimension < 1) fail(Errc::invalid_dimension, "dimension must be >= 1");
  return TermParser(text, dimension).parse();
}

std::string to_string(const Polynomiald& p) {
  static constexpr char kVariables[] = {'x', 'y', 'z'};
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (std::size_t i = 0; i < p.basis().size(); ++i) {
    const double c = p.coefficients()(static_cast<Eigen::Index>(i));
    if (c == 0.0) continue;
    const MultiIndex& alpha = p.basis()[i];
    out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    const double magnitude = std::abs(c);
    const bool unit = magnitude == 1.0 && alpha.order() > 0;
    if (!unit) out << magnitude;
    for (int d = 0; d < alpha.dimension(); ++d) {
      if (alpha[d] == 0) continue;
      if (d < 3) {
        out << kVariables[d];
      } else {
        out << "x" << d;
      }
      if (alpha[d] > 1) out << '^' << alpha[d];
    }
    first = false;
  }
  if (first) out << '0';
  return out.str();
}

}  // namespace bramble
