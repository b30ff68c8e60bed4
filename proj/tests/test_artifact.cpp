#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gfm/artifact.hpp"
#include "gfm/builtin_indexers.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace gfm;
using fixtures::bytes_of;
using fixtures::make_artifact;

TEST_CASE("load_artifact maps extensions and sizes", "[artifact]") {
  fixtures::TempDir dir;

  SECTION("4-byte file has 32 bits") {
    const auto p = dir.write("abcd.bin", bytes_of("abcd"));
    const auto a = load_artifact(p);
    CHECK(a.bit_length() == 32);
    CHECK(a.media_type == MediaType::Octet);
  }
  SECTION("empty file loads with 0 bits") {
    const auto p = dir.write("empty.txt", {});
    const auto a = load_artifact(p);
    CHECK(a.bit_length() == 0);
    CHECK(a.media_type == MediaType::Text);
  }
  SECTION("2x2 PPM fixture is 23 bytes = 184 bits") {
    const auto p = dir.write("img.ppm", fixtures::ppm2x2_bytes());
    const auto a = load_artifact(p);
    CHECK(a.bit_length() == 184);
    CHECK(a.media_type == MediaType::Ppm);
  }
  SECTION("extension map") {
    CHECK(load_artifact(dir.write("x.wav", {1})).media_type == MediaType::Wav);
    CHECK(load_artifact(dir.write("x.csv", {1})).media_type == MediaType::Csv);
    CHECK(load_artifact(dir.write("x.xyz", {1})).media_type == MediaType::Octet);
    CHECK(load_artifact(dir.write("noext", {1})).media_type == MediaType::Octet);
  }
  SECTION("hint overrides extension") {
    const auto p = dir.write("data.bin", bytes_of("a,b\n1,2\n"));
    CHECK(load_artifact(p, "text/csv").media_type == MediaType::Csv);
  }
  SECTION("bad hint is UnknownMediaType") {
    const auto p = dir.write("data.bin", {1});
    CHECK_THROWS_MATCHES(load_artifact(p, "video/mp4"), GfmError,
                         Catch::Matchers::Predicate<GfmError>([](const GfmError& e) {
                           return e.code() == ErrorCode::UnknownMediaType;
                         }));
  }
  SECTION("missing file is FileUnreadable") {
    CHECK_THROWS_MATCHES(load_artifact(dir.path() / "nope.bin"), GfmError,
                         Catch::Matchers::Predicate<GfmError>([](const GfmError& e) {
                           return e.code() == ErrorCode::FileUnreadable;
                         }));
  }
}

TEST_CASE("canonical_bits normalizes spans", "[artifact]") {
  const auto a = fixtures::ppm2x2();

  Fragment adjacent;
  adjacent.source = a.id;
  adjacent.bits = BitSpanSet::of({{0, 8}, {8, 16}});
  CHECK(canonical_bits(adjacent).spans() == std::vector<BitSpan>{{0, 16}});

  Fragment unsorted;
  unsorted.source = a.id;
  unsorted.bits = BitSpanSet::of({{16, 24}, {0, 8}});
  CHECK(canonical_bits(unsorted).spans() == std::vector<BitSpan>{{0, 8}, {16, 24}});

  CHECK(canonical_bits(whole_fragment(a)).spans() == std::vector<BitSpan>{{0, 184}});

  // Idempotence
  const BitSpanSet once = canonical_bits(unsorted);
  Fragment again;
  again.source = a.id;
  again.bits = once;
  CHECK(canonical_bits(again) == once);
}

TEST_CASE("extract slices bytes and bits", "[artifact]") {
  const auto a = make_artifact("abcd", MediaType::Octet, bytes_of("abcd"));

  Fragment f;
  f.source = a.id;

  SECTION("byte slice") {
    f.bits = BitSpanSet::of({{8, 24}});
    CHECK(extract(a, f) == bytes_of("bc"));
  }
  SECTION("scattered spans concatenate") {
    f.bits = BitSpanSet::of({{0, 8}, {24, 32}});
    CHECK(extract(a, f) == bytes_of("ad"));
  }
  SECTION("unaligned window matches the bit-shift oracle") {
    const auto ab = make_artifact("ab", MediaType::Octet, bytes_of("ab"));
    f.source = ab.id;
    f.bits = BitSpanSet::of({{4, 12}});
    const auto got = extract(ab, f);
    CHECK(got == oracles::bit_slice(ab.content, {{4, 12}}));
    CHECK(got == std::vector<std::uint8_t>{0x16});  // low nibble of 'a', high of 'b'
  }
  SECTION("span out of range") {
    f.bits = BitSpanSet::of({{24, 40}});
    CHECK_THROWS_MATCHES(extract(a, f), GfmError,
                         Catch::Matchers::Predicate<GfmError>([](const GfmError& e) {
                           return e.code() == ErrorCode::SpanOutOfRange;
                         }));
  }
}

TEST_CASE("extract length equals total span length", "[artifact][property]") {
  std::mt19937 rng(7);
  const auto wav = fixtures::wav30s();
  std::uniform_int_distribution<std::uint64_t> pos(0, wav.bit_length());
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<BitSpan> spans;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      std::uint64_t b0 = pos(rng), b1 = pos(rng);
      if (b0 > b1) std::swap(b0, b1);
      spans.push_back({b0, b1});
    }
    Fragment f;
    f.source = wav.id;
    f.bits = BitSpanSet::of(spans);
    REQUIRE(f.bits.within(wav.bit_length()));
    const auto got = extract(wav, f);
    const std::uint64_t total = f.bits.total_bits();
    CHECK(got.size() == (total + 7) / 8);
    CHECK(got == oracles::bit_slice(wav.content, f.bits.spans()));
  }
}

TEST_CASE("as_artifact keeps whole fragments identical", "[artifact]") {
  const auto a = fixtures::text3();
  const auto derived = as_artifact(a, whole_fragment(a));
  CHECK(derived.content == a.content);
  CHECK(derived.media_type == a.media_type);
  REQUIRE(derived.origin.has_value());
  CHECK(derived.origin->source_id == a.id);
}

TEST_CASE("as_artifact rewrites the WAV header for time fragments", "[artifact]") {
  const auto wav = fixtures::wav30s();
  const WavInfo info = parse_wav(wav.content);
  const auto [b0, b1] = oracles::wav_byte_range(8000, 2, info.data_offset, 10.0, 15.0);

  Fragment f;
  f.source = wav.id;
  f.bits = BitSpanSet::single(b0 * 8, b1 * 8);
  f.extent = TimeIntervalExtent{10.0, 15.0};
  f.context = TimeView{10.0, 15.0};

  const auto derived = as_artifact(wav, f);
  CHECK(derived.media_type == MediaType::Wav);
  const WavInfo out = parse_wav(derived.content);
  CHECK(out.sample_rate == 8000);
  CHECK(out.duration() == 5.0);  // the paper's 5 s interval
  const std::vector<std::uint8_t> payload(derived.content.begin() + 44, derived.content.end());
  CHECK(payload == extract(wav, f));
}

TEST_CASE("as_artifact synthesizes a PPM header for rectangles", "[artifact]") {
  const auto img = fixtures::ppm2x2();

  Fragment f;
  f.source = img.id;
  f.bits = region_bits(parse_ppm(img.content), 1, 1, 1, 1);
  f.extent = RectExtent{1, 1, 1, 1};
  f.context = RectView{1, 1, 1, 1};

  const auto derived = as_artifact(img, f);
  CHECK(derived.media_type == MediaType::Ppm);
  std::vector<std::uint8_t> expected = bytes_of("P6\n1 1\n255\n");
  expected.insert(expected.end(), {0, 0, 255});  // the blue pixel at (1,1)
  CHECK(derived.content == expected);
}

TEST_CASE("as_artifact materializes a rectangular pixel set as PPM", "[artifact]") {
  const auto img = fixtures::ppm2x2();
  const PpmInfo info = parse_ppm(img.content);

  Fragment f;
  f.source = img.id;
  f.bits = BitSpanSet::of(pixel_bit_spans(info, 1, 0));
  f.extent = PixelSetExtent{{{1, 0}}};
  f.context = RawView{};
  CHECK(as_artifact(img, f).media_type == MediaType::Ppm);

  // A genuinely scattered set stays an opaque byte stream.
  Fragment scattered;
  scattered.source = img.id;
  auto spans = pixel_bit_spans(info, 1, 0);
  for (const BitSpan& s : pixel_bit_spans(info, 0, 1)) spans.push_back(s);
  scattered.bits = BitSpanSet::of(spans);
  scattered.extent = PixelSetExtent{{{1, 0}, {0, 1}}};
  scattered.context = RawView{};
  const auto opaque = as_artifact(img, scattered);
  CHECK(opaque.media_type == MediaType::Octet);
  CHECK(opaque.content == extract(img, scattered));
}

TEST_CASE("fragments of derived artifacts map back into their source", "[artifact][property]") {
  const auto text = fixtures::text3();
  const TextIndex ix = index_text(text.content);
  const auto paras = paragraphs_in(ix, 0, ix.char_count());
  REQUIRE(paras.size() == 3);

  const auto [pb0, pb1] = ix.byte_range(paras[1].begin, paras[1].end);
  Fragment f;
  f.source = text.id;
  f.bits = BitSpanSet::single(pb0 * 8, pb1 * 8);
  f.extent = CharRangeExtent{paras[1].begin, paras[1].end};
  f.context = TextView{paras[1].begin, paras[1].end};

  const auto derived = as_artifact(text, f);
  CHECK(derived.media_type == MediaType::Text);

  std::mt19937 rng(21);
  const std::uint64_t n = derived.bit_length();
  for (int iter = 0; iter < 100; ++iter) {
    std::uint64_t b0 = rng() % (n + 1), b1 = rng() % (n + 1);
    if (b0 > b1) std::swap(b0, b1);
    const BitSpanSet inner = BitSpanSet::of({{b0, b1}});
    const BitSpanSet mapped = bits_in_source(derived, inner);
    CHECK(f.bits.contains(mapped));
    CHECK(mapped.total_bits() == inner.total_bits());
  }
}

TEST_CASE("random fragments stay inside the artifact", "[artifact][property]") {
  std::mt19937 rng(3);
  const auto a = fixtures::ppm8x8();
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<BitSpan> spans;
    for (int i = 0; i < 3; ++i) {
      std::uint64_t b0 = rng() % a.bit_length(), b1 = rng() % a.bit_length();
      if (b0 > b1) std::swap(b0, b1);
      spans.push_back({b0, b1});
    }
    Fragment f;
    f.source = a.id;
    f.bits = BitSpanSet::of(spans);
    CHECK(f.bits.within(a.bit_length()));
    for (std::size_t i = 1; i < f.bits.spans().size(); ++i)
      CHECK(f.bits.spans()[i - 1].end < f.bits.spans()[i].begin);
  }
}
