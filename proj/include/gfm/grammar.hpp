#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gfm/error.hpp"
#include "gfm/media/ppm.hpp"  // RgbColor

namespace gfm {

// Concrete fragment-expression syntax:
//
//   expr    := segment ("/" segment)*
//   segment := NAME "[" [binding ("," binding)*] "]"
//   binding := NAME "=" value
//   value   := INTEGER | DECIMAL | STRING | COLOR | expr
//   NAME    := [a-z][a-z0-9_]*        INTEGER := 0|[1-9][0-9]*
//   DECIMAL := INTEGER "." [0-9]+     COLOR   := "#" 6 hex digits
//   STRING  := "'" (any char except ' and \, or \' or \\)* "'"
//
// "/" chains re-index left to right; nested expressions appear only as
// binding values. Whitespace is allowed around all punctuation.

struct DecimalLit {
  std::string int_digits;   // canonical, no leading zeros
  std::string frac_digits;  // at least one digit

  double value() const { return std::stod(int_digits + "." + frac_digits); }
  friend bool operator==(const DecimalLit&, const DecimalLit&) = default;
};

struct Segment;

struct FragmentExpression {
  std::vector<Segment> segments;
  friend bool operator==(const FragmentExpression&, const FragmentExpression&) = default;
};

struct ExprValue {
  enum class Kind { Integer, Decimal, Text, Color, Nested };

  Kind kind = Kind::Integer;
  std::int64_t integer = 0;
  DecimalLit decimal;
  std::string text;
  RgbColor color{};
  std::vector<FragmentExpression> nested;  // exactly one element when Kind::Nested

  static ExprValue of_integer(std::int64_t v) {
    ExprValue e;
    e.integer = v;
    return e;
  }
  static ExprValue of_decimal(DecimalLit d) {
    ExprValue e;
    e.kind = Kind::Decimal;
    e.decimal = std::move(d);
    return e;
  }
  static ExprValue of_text(std::string t) {
    ExprValue e;
    e.kind = Kind::Text;
    e.text = std::move(t);
    return e;
  }
  static ExprValue of_color(RgbColor c) {
    ExprValue e;
    e.kind = Kind::Color;
    e.color = c;
    return e;
  }
  static ExprValue of_nested(FragmentExpression expr) {
    ExprValue e;
    e.kind = Kind::Nested;
    e.nested.push_back(std::move(expr));
    return e;
  }

  friend bool operator==(const ExprValue&, const ExprValue&) = default;
};

struct ExprBinding {
  std::string name;
  ExprValue value;
  friend bool operator==(const ExprBinding&, const ExprBinding&) = default;
};

struct Segment {
  std::string indexer;
  std::vector<ExprBinding> bindings;
  friend bool operator==(const Segment&, const Segment&) = default;
};

inline bool is_name_token(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s.substr(1))
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

namespace detail {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view input) : in_(input) {}

  FragmentExpression parse_all() {
    skip_ws();
    FragmentExpression expr = parse_expr();
    skip_ws();
    if (pos_ != in_.size()) fail("end of input");
    return expr;
  }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) { throw SyntaxError(pos_, expected); }

  void skip_ws() {
    while (pos_ < in_.size() &&
           std::isspace(static_cast<unsigned char>(in_[pos_])))
      ++pos_;
  }

  bool peek_is(char c) const { return pos_ < in_.size() && in_[pos_] == c; }

  void expect(char c, const char* what) {
    if (!peek_is(c)) fail(what);
    ++pos_;
  }

  FragmentExpression parse_expr() {
    FragmentExpression expr;
    expr.segments.push_back(parse_segment());
    skip_ws();
    while (peek_is('/')) {
      ++pos_;
      skip_ws();
      expr.segments.push_back(parse_segment());
      skip_ws();
    }
    return expr;
  }

  Segment parse_segment() {
    Segment seg;
    seg.indexer = parse_name();
    skip_ws();
    expect('[', "'['");
    skip_ws();
    if (!peek_is(']')) {
      seg.bindings.push_back(parse_binding());
      skip_ws();
      while (peek_is(',')) {
        ++pos_;
        skip_ws();
        seg.bindings.push_back(parse_binding());
        skip_ws();
      }
    }
    expect(']', "']'");
    return seg;
  }

  ExprBinding parse_binding() {
    ExprBinding b;
    b.name = parse_name();
    skip_ws();
    expect('=', "'='");
    skip_ws();
    b.value = parse_value();
    return b;
  }

  std::string parse_name() {
    if (pos_ >= in_.size() || in_[pos_] < 'a' || in_[pos_] > 'z')
      fail("name ([a-z][a-z0-9_]*)");
    std::size_t start = pos_;
    while (pos_ < in_.size()) {
      const char c = in_[pos_];
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') ++pos_;
      else break;
    }
    return std::string(in_.substr(start, pos_ - start));
  }

  ExprValue parse_value() {
    if (pos_ >= in_.size()) fail("value");
    const char c = in_[pos_];
    if (c >= '0' && c <= '9') return parse_number();
    if (c == '\'') return parse_string();
    if (c == '#') return parse_color();
    if (c >= 'a' && c <= 'z') return ExprValue::of_nested(parse_expr());
    fail("value (integer, decimal, string, color or nested expression)");
  }

  ExprValue parse_number() {
    std::size_t start = pos_;
    if (in_[pos_] == '0') {
      ++pos_;
    } else {
      while (pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '9') ++pos_;
    }
    std::string int_digits(in_.substr(start, pos_ - start));
    if (peek_is('.')) {
      ++pos_;
      std::size_t fstart = pos_;
      while (pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '9') ++pos_;
      if (pos_ == fstart) fail("fraction digits");
      return ExprValue::of_decimal(
          DecimalLit{std::move(int_digits), std::string(in_.substr(fstart, pos_ - fstart))});
    }
    std::int64_t v = 0;
    for (char d : int_digits) {
      if (v > (INT64_MAX - (d - '0')) / 10) fail("integer within range");
      v = v * 10 + (d - '0');
    }
    return ExprValue::of_integer(v);
  }

  ExprValue parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= in_.size()) fail("closing quote");
      const char c = in_[pos_];
      if (c == '\'') {
        ++pos_;
        return ExprValue::of_text(std::move(out));
      }
      if (c == '\\') {
        if (pos_ + 1 >= in_.size()) fail("escape (\\' or \\\\)");
        const char e = in_[pos_ + 1];
        if (e != '\'' && e != '\\') {
          ++pos_;
          fail("escape (\\' or \\\\)");
        }
        out.push_back(e);
        pos_ += 2;
      } else {
        out.push_back(c);
        ++pos_;
      }
    }
  }

  ExprValue parse_color() {
    ++pos_;  // '#'
    std::uint32_t v = 0;
    for (int i = 0; i < 6; ++i) {
      if (pos_ >= in_.size()) fail("6 hex digits");
      const char c = in_[pos_];
      std::uint32_t d;
      if (c >= '0' && c <= '9') d = static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') d = static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') d = static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("6 hex digits");
      v = (v << 4) | d;
      ++pos_;
    }
    return ExprValue::of_color(RgbColor{static_cast<std::uint8_t>(v >> 16),
                                        static_cast<std::uint8_t>(v >> 8),
                                        static_cast<std::uint8_t>(v)});
  }
};

inline void print_value(const ExprValue& v, std::string& out);

inline void print_segment_to(const Segment& seg, std::string& out) {
  out += seg.indexer;
  out.push_back('[');
  for (std::size_t i = 0; i < seg.bindings.size(); ++i) {
    if (i) out.push_back(',');
    out += seg.bindings[i].name;
    out.push_back('=');
    print_value(seg.bindings[i].value, out);
  }
  out.push_back(']');
}

inline void print_expr_to(const FragmentExpression& expr, std::string& out) {
  for (std::size_t i = 0; i < expr.segments.size(); ++i) {
    if (i) out.push_back('/');
    print_segment_to(expr.segments[i], out);
  }
}

inline void print_value(const ExprValue& v, std::string& out) {
  switch (v.kind) {
    case ExprValue::Kind::Integer:
      out += std::to_string(v.integer);
      break;
    case ExprValue::Kind::Decimal:
      out += v.decimal.int_digits;
      out.push_back('.');
      out += v.decimal.frac_digits;
      break;
    case ExprValue::Kind::Text:
      out.push_back('\'');
      for (char c : v.text) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('\'');
      break;
    case ExprValue::Kind::Color: {
      static const char* hex = "0123456789abcdef";
      out.push_back('#');
      for (std::uint8_t b : {v.color.r, v.color.g, v.color.b}) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xF]);
      }
      break;
    }
    case ExprValue::Kind::Nested:
      print_expr_to(v.nested.front(), out);
      break;
  }
}

}  // namespace detail

inline FragmentExpression parse_expression(std::string_view input) {
  return detail::ExpressionParser(input).parse_all();
}

/// Canonical form: no whitespace, single quotes, lowercase hex colors,
/// segments joined by "/".
inline std::string print_expression(const FragmentExpression& expr) {
  std::string out;
  detail::print_expr_to(expr, out);
  return out;
}

inline std::string print_segment(const Segment& seg) {
  std::string out;
  detail::print_segment_to(seg, out);
  return out;
}

}  // namespace gfm
