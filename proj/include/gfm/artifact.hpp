#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "gfm/bitspan.hpp"
#include "gfm/error.hpp"
#include "gfm/fragment.hpp"
#include "gfm/media/csv.hpp"
#include "gfm/media/ppm.hpp"
#include "gfm/media/text.hpp"
#include "gfm/media/wav.hpp"

namespace gfm {

/// Provenance of an artifact derived from a fragment: which source bits the
/// payload came from and where the payload starts (synthesized headers shift
/// it past offset zero).
struct ArtifactOrigin {
  std::string source_id;
  BitSpanSet source_bits;
  std::uint64_t payload_bit_offset = 0;
};

/// A finite, immutable body of content. Media-type well-formedness is
/// checked at resolve time, never at load time.
struct InformationArtifact {
  std::string id;
  MediaType media_type = MediaType::Octet;
  std::vector<std::uint8_t> content;
  std::optional<ArtifactOrigin> origin;

  std::uint64_t bit_length() const noexcept { return content.size() * 8; }
};

inline MediaType media_type_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".ppm") return MediaType::Ppm;
  if (ext == ".wav") return MediaType::Wav;
  if (ext == ".csv") return MediaType::Csv;
  if (ext == ".txt") return MediaType::Text;
  return MediaType::Octet;
}

inline InformationArtifact load_artifact(const std::filesystem::path& path,
                                         std::optional<std::string> media_type_hint = {},
                                         std::optional<std::string> id = {}) {
  MediaType type;
  if (media_type_hint) {
    const auto parsed = media_type_from_mime(*media_type_hint);
    if (!parsed)
      throw GfmError(ErrorCode::UnknownMediaType, "unsupported media type '" + *media_type_hint + "'");
    type = *parsed;
  } else {
    type = media_type_from_extension(path);
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw GfmError(ErrorCode::FileUnreadable, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> content(std::istreambuf_iterator<char>(in), {});
  if (in.bad()) throw GfmError(ErrorCode::FileUnreadable, "read failed on '" + path.string() + "'");

  InformationArtifact a;
  a.id = id ? *id : path.generic_string();
  a.media_type = type;
  a.content = std::move(content);
  return a;
}

/// The lambda fragment: the artifact's whole content.
inline Fragment whole_fragment(const InformationArtifact& a) {
  Fragment f;
  f.source = a.id;
  f.bits = BitSpanSet::single(0, a.bit_length());
  f.extent = ByteRangeExtent{0, a.content.size()};
  f.context = WholeView{};
  return f;
}

/// Normalized bit-span set of a fragment (sorted, disjoint, merged).
inline BitSpanSet canonical_bits(const Fragment& f) { return f.bits; }

inline std::vector<std::uint8_t> extract_bits(const std::vector<std::uint8_t>& content,
                                              const BitSpanSet& bits) {
  if (!bits.within(content.size() * 8))
    throw GfmError(ErrorCode::SpanOutOfRange, "fragment spans exceed artifact bit length");

  bool byte_aligned = true;
  for (const BitSpan& s : bits.spans())
    if (s.begin % 8 != 0 || s.end % 8 != 0) byte_aligned = false;

  std::vector<std::uint8_t> out;
  if (byte_aligned) {
    out.reserve(bits.total_bits() / 8);
    for (const BitSpan& s : bits.spans())
      out.insert(out.end(), content.begin() + static_cast<std::ptrdiff_t>(s.begin / 8),
                 content.begin() + static_cast<std::ptrdiff_t>(s.end / 8));
    return out;
  }

  // Unaligned: concatenate bits most-significant-first, zero-pad the tail.
  std::uint8_t acc = 0;
  int filled = 0;
  for (const BitSpan& s : bits.spans()) {
    for (std::uint64_t b = s.begin; b < s.end; ++b) {
      const std::uint8_t bit = (content[b >> 3] >> (7 - (b & 7))) & 1u;
      acc = static_cast<std::uint8_t>((acc << 1) | bit);
      if (++filled == 8) {
        out.push_back(acc);
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - filled)));
  return out;
}

inline std::vector<std::uint8_t> extract(const InformationArtifact& a, const Fragment& f) {
  return extract_bits(a.content, f.bits);
}

namespace detail {

// A pixel set that covers its bounding rectangle exactly, in raster order,
// can be materialized as an image again.
inline std::optional<RectExtent> complete_rect(const PixelSetExtent& px) {
  if (px.pixels.empty()) return std::nullopt;
  std::uint32_t x0 = px.pixels.front().x, x1 = x0, y0 = px.pixels.front().y, y1 = y0;
  for (const PixelCoord& p : px.pixels) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const std::uint64_t w = x1 - x0 + 1, h = y1 - y0 + 1;
  if (px.pixels.size() != w * h) return std::nullopt;
  std::size_t k = 0;
  for (std::uint32_t y = y0; y <= y1; ++y)
    for (std::uint32_t x = x0; x <= x1; ++x, ++k)
      if (px.pixels[k] != PixelCoord{x, y}) return std::nullopt;
  return RectExtent{x0, y0, static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)};
}

inline std::vector<std::uint8_t> ppm_sub_image(const InformationArtifact& src,
                                               const RectExtent& rect) {
  const PpmInfo info = parse_ppm(src.content);
  std::string head = std::string(info.binary ? "P6" : "P3") + "\n" + std::to_string(rect.w) +
                     " " + std::to_string(rect.h) + "\n" + std::to_string(info.maxval) + "\n";
  std::vector<std::uint8_t> out(head.begin(), head.end());
  if (info.binary) {
    for (std::uint32_t dy = 0; dy < rect.h; ++dy) {
      const std::uint64_t p = (static_cast<std::uint64_t>(rect.y) + dy) * info.width + rect.x;
      const std::uint64_t b = info.raster_offset + p * 3;
      out.insert(out.end(), src.content.begin() + static_cast<std::ptrdiff_t>(b),
                 src.content.begin() + static_cast<std::ptrdiff_t>(b + rect.w * 3ull));
    }
  } else {
    // ASCII samples re-joined with normalized separators, one row per line.
    std::string body;
    for (std::uint32_t dy = 0; dy < rect.h; ++dy) {
      for (std::uint32_t dx = 0; dx < rect.w; ++dx) {
        const std::uint64_t p = (static_cast<std::uint64_t>(rect.y) + dy) * info.width +
                                (rect.x + dx);
        for (int c = 0; c < 3; ++c) {
          if (dx != 0 || c != 0) body.push_back(' ');
          body += std::to_string(info.sample_values[p * 3 + c]);
        }
      }
      body.push_back('\n');
    }
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

}  // namespace detail

/// Materializes a fragment as an artifact of its own. Text, CSV and opaque
/// fragments carry the raw extraction; rectangular image fragments and time
/// fragments get a synthesized header so the result stays well-formed.
inline InformationArtifact as_artifact(const InformationArtifact& src, const Fragment& f,
                                       std::optional<std::string> id = {}) {
  InformationArtifact out;
  out.id = id ? *id : src.id + "#fragment";
  out.media_type = induced_media_type(f, src.media_type);

  ArtifactOrigin origin{src.id, f.bits, 0};

  if (const auto* rect_view = std::get_if<RectView>(&f.context);
      rect_view && src.media_type == MediaType::Ppm) {
    const RectExtent rect{rect_view->x, rect_view->y, rect_view->w, rect_view->h};
    out.content = detail::ppm_sub_image(src, rect);
    origin.payload_bit_offset = out.content.size() * 8 - f.bits.total_bits();
    const PpmInfo info = parse_ppm(src.content);
    if (!info.binary) origin.payload_bit_offset = 0;  // P3 body is re-joined, not copied
  } else if (std::holds_alternative<TimeView>(f.context) && src.media_type == MediaType::Wav) {
    const WavInfo info = parse_wav(src.content);
    out.content = synthesize_wav(info, extract(src, f));
    origin.payload_bit_offset = 44 * 8;
  } else if (f.extent && std::holds_alternative<PixelSetExtent>(*f.extent) &&
             src.media_type == MediaType::Ppm) {
    const auto& px = std::get<PixelSetExtent>(*f.extent);
    if (const auto rect = detail::complete_rect(px)) {
      out.media_type = MediaType::Ppm;
      out.content = detail::ppm_sub_image(src, *rect);
      const PpmInfo info = parse_ppm(src.content);
      origin.payload_bit_offset =
          info.binary ? out.content.size() * 8 - f.bits.total_bits() : 0;
    } else {
      out.content = extract(src, f);
    }
  } else {
    out.content = extract(src, f);
  }

  out.origin = std::move(origin);
  return out;
}

/// Translates bit positions of a derived artifact back into its source:
/// payload bits map through the origin spans, synthesized header bits map to
/// nothing.
inline BitSpanSet bits_in_source(const InformationArtifact& derived, const BitSpanSet& bits) {
  if (!derived.origin)
    throw GfmError(ErrorCode::ForeignFragment, "artifact has no fragment origin");
  const ArtifactOrigin& o = *derived.origin;
  std::vector<BitSpan> mapped;
  for (const BitSpan& s : bits.spans()) {
    const std::uint64_t lo = std::max(s.begin, o.payload_bit_offset);
    if (lo >= s.end) continue;
    const BitSpanSet windowed =
        o.source_bits.slice(lo - o.payload_bit_offset, s.end - o.payload_bit_offset);
    for (const BitSpan& m : windowed.spans()) mapped.push_back(m);
  }
  return BitSpanSet::of(std::move(mapped));
}

}  // namespace gfm
