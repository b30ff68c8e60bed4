#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gfm/grammar.hpp"

using namespace gfm;

namespace {

std::string gen_name(std::mt19937& rng) {
  static const std::string head = "abcdefghijklmnopqrstuvwxyz";
  static const std::string tail = head + "0123456789_";
  std::string out;
  out.push_back(head[rng() % head.size()]);
  const int extra = static_cast<int>(rng() % 6);
  for (int i = 0; i < extra; ++i) out.push_back(tail[rng() % tail.size()]);
  return out;
}

std::string gen_text(std::mt19937& rng) {
  static const std::string pool = "abcXY 09_'\\#/=[],.z";
  std::string out;
  const int n = static_cast<int>(rng() % 8);
  for (int i = 0; i < n; ++i) out.push_back(pool[rng() % pool.size()]);
  return out;
}

FragmentExpression gen_expr(std::mt19937& rng, int depth);

ExprValue gen_value(std::mt19937& rng, int depth) {
  const int pick = static_cast<int>(rng() % (depth < 4 ? 5 : 4));
  switch (pick) {
    case 0:
      return ExprValue::of_integer(static_cast<std::int64_t>(rng() % 1000000));
    case 1: {
      DecimalLit d;
      d.int_digits = std::to_string(rng() % 1000);
      const int fn = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < fn; ++i) d.frac_digits.push_back(static_cast<char>('0' + rng() % 10));
      return ExprValue::of_decimal(std::move(d));
    }
    case 2:
      return ExprValue::of_text(gen_text(rng));
    case 3:
      return ExprValue::of_color(RgbColor{static_cast<std::uint8_t>(rng() % 256),
                                          static_cast<std::uint8_t>(rng() % 256),
                                          static_cast<std::uint8_t>(rng() % 256)});
    default:
      return ExprValue::of_nested(gen_expr(rng, depth + 1));
  }
}

Segment gen_segment(std::mt19937& rng, int depth) {
  Segment seg;
  seg.indexer = gen_name(rng);
  const int n = static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) seg.bindings.push_back({gen_name(rng), gen_value(rng, depth)});
  return seg;
}

FragmentExpression gen_expr(std::mt19937& rng, int depth) {
  FragmentExpression expr;
  const int n = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < n; ++i) expr.segments.push_back(gen_segment(rng, depth));
  return expr;
}

}  // namespace

TEST_CASE("the catalog expressions parse to their documented shapes", "[grammar]") {
  SECTION("pixel[x=3,y=4]") {
    const auto expr = parse_expression("pixel[x=3,y=4]");
    REQUIRE(expr.segments.size() == 1);
    const Segment& seg = expr.segments[0];
    CHECK(seg.indexer == "pixel");
    REQUIRE(seg.bindings.size() == 2);
    CHECK(seg.bindings[0].name == "x");
    CHECK(seg.bindings[0].value == ExprValue::of_integer(3));
    CHECK(seg.bindings[1].name == "y");
    CHECK(seg.bindings[1].value == ExprValue::of_integer(4));
  }
  SECTION("time[s=10,f=15]/time[s=0,f=2]") {
    const auto expr = parse_expression("time[s=10,f=15]/time[s=0,f=2]");
    REQUIRE(expr.segments.size() == 2);
    CHECK(expr.segments[0].indexer == "time");
    CHECK(expr.segments[1].bindings[1].value == ExprValue::of_integer(2));
  }
  SECTION("pbounding[pixels=colormask[color='red']]") {
    const auto expr = parse_expression("pbounding[pixels=colormask[color='red']]");
    REQUIRE(expr.segments.size() == 1);
    REQUIRE(expr.segments[0].bindings.size() == 1);
    const ExprValue& v = expr.segments[0].bindings[0].value;
    REQUIRE(v.kind == ExprValue::Kind::Nested);
    REQUIRE(v.nested.size() == 1);
    const Segment& inner = v.nested.front().segments.at(0);
    CHECK(inner.indexer == "colormask");
    CHECK(inner.bindings.at(0).value == ExprValue::of_text("red"));
  }
}

TEST_CASE("printing normalizes whitespace and quoting", "[grammar]") {
  CHECK(print_expression(parse_expression(" pixel[ x = 3 , y = 4 ] ")) == "pixel[x=3,y=4]");
  CHECK(print_expression(parse_expression("id[]")) == "id[]");
  CHECK(print_expression(parse_expression("id [ ]")) == "id[]");
  CHECK(print_expression(parse_expression("colormask[color=#FF00Aa]")) ==
        "colormask[color=#ff00aa]");
  CHECK(print_expression(parse_expression("m[p='a\\'b\\\\c']")) == "m[p='a\\'b\\\\c']");
  CHECK(print_expression(parse_expression("time[s=1.50,f=2.25]")) == "time[s=1.50,f=2.25]");

  for (const std::string text : {"pixel[x=3,y=4]", "time[s=10,f=15]/time[s=0,f=2]",
                                 "pbounding[pixels=colormask[color='red']]"}) {
    const auto expr = parse_expression(text);
    CHECK(parse_expression(print_expression(expr)) == expr);
    CHECK(print_expression(expr) == text);
  }
}

TEST_CASE("decimals require a fraction and canonical integers", "[grammar]") {
  CHECK(parse_expression("t[s=0.5]").segments[0].bindings[0].value.kind ==
        ExprValue::Kind::Decimal);
  CHECK_THROWS_AS(parse_expression("t[s=1.]"), SyntaxError);
  CHECK_THROWS_AS(parse_expression("t[s=01]"), SyntaxError);
  CHECK_THROWS_AS(parse_expression("t[s=.5]"), SyntaxError);
  CHECK(parse_expression("t[s=0.50]").segments[0].bindings[0].value.decimal.frac_digits == "50");
}

TEST_CASE("syntax errors carry a byte offset and expectation", "[grammar]") {
  auto offset_of = [](const std::string& text) -> std::size_t {
    try {
      parse_expression(text);
    } catch (const SyntaxError& e) {
      return e.offset();
    }
    FAIL("expected SyntaxError for: " + text);
    return 0;
  };

  CHECK(offset_of("pixel[x=]") == 8);
  CHECK(offset_of("pixel") == 5);
  CHECK(offset_of("pixel[x=1") == 9);
  CHECK(offset_of("Pixel[x=1]") == 0);
  CHECK(offset_of("pixel[x=1]#") == 10);
  CHECK(offset_of("pixel[x=1]/") == 11);
  CHECK(offset_of("m[p='ab]") == 8);
  CHECK(offset_of("m[p='a\\nb']") == 7);  // only \' and \\ escape
  CHECK(offset_of("c[c=#ff00]") == 9);
}

TEST_CASE("round-trip and idempotence on generated ASTs", "[grammar][property]") {
  std::mt19937 rng(101);
  for (int iter = 0; iter < 300; ++iter) {
    const FragmentExpression expr = gen_expr(rng, 1);
    const std::string text = print_expression(expr);
    const FragmentExpression back = parse_expression(text);
    REQUIRE(back == expr);
    CHECK(print_expression(back) == text);
  }
}

TEST_CASE("truncated expressions fail inside the input", "[grammar][property]") {
  std::mt19937 rng(211);
  for (int iter = 0; iter < 200; ++iter) {
    const std::string text = print_expression(gen_expr(rng, 1));
    const std::size_t cut = rng() % (text.size() + 1);
    const std::string prefix = text.substr(0, cut);
    try {
      parse_expression(prefix);  // a prefix may still be a valid expression
    } catch (const SyntaxError& e) {
      CHECK(e.offset() <= prefix.size());
    }
  }
}
