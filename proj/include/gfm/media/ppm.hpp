#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfm/bitspan.hpp"
#include "gfm/error.hpp"
#include "gfm/fragment.hpp"

namespace gfm {

struct RgbColor {
  std::uint8_t r = 0, g = 0, b = 0;
  auto operator<=>(const RgbColor&) const = default;
};

/// Parsed PPM geometry. For P6 the raster is contiguous at raster_offset;
/// for P3 each ASCII sample token keeps its own byte span.
struct PpmInfo {
  bool binary = true;  // P6 vs P3
  std::uint32_t width = 0, height = 0, maxval = 255;
  std::uint64_t raster_offset = 0;                          // P6 only
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sample_spans;  // P3 only
  std::vector<std::uint8_t> sample_values;                  // P3 only, parsed

  std::uint64_t pixel_count() const noexcept {
    return static_cast<std::uint64_t>(width) * height;
  }
};

namespace detail {

inline void ppm_skip_space(const std::vector<std::uint8_t>& b, std::uint64_t& i) {
  const std::uint64_t n = b.size();
  while (i < n) {
    const std::uint8_t c = b[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') {
      ++i;
    } else if (c == '#') {
      while (i < n && b[i] != '\n') ++i;
    } else {
      break;
    }
  }
}

inline std::uint64_t ppm_read_uint(const std::vector<std::uint8_t>& b, std::uint64_t& i,
                                   std::uint64_t* token_begin = nullptr) {
  ppm_skip_space(b, i);
  if (token_begin) *token_begin = i;
  if (i >= b.size() || b[i] < '0' || b[i] > '9')
    throw GfmError(ErrorCode::ResolverFailure, "malformed PPM: expected integer");
  std::uint64_t v = 0;
  while (i < b.size() && b[i] >= '0' && b[i] <= '9') {
    v = v * 10 + (b[i] - '0');
    if (v > 0xFFFFFFFFull) throw GfmError(ErrorCode::ResolverFailure, "malformed PPM: integer overflow");
    ++i;
  }
  return v;
}

}  // namespace detail

inline PpmInfo parse_ppm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '3'))
    throw GfmError(ErrorCode::ResolverFailure, "malformed PPM: bad magic");
  PpmInfo info;
  info.binary = bytes[1] == '6';
  std::uint64_t i = 2;
  info.width = static_cast<std::uint32_t>(detail::ppm_read_uint(bytes, i));
  info.height = static_cast<std::uint32_t>(detail::ppm_read_uint(bytes, i));
  const std::uint64_t maxval = detail::ppm_read_uint(bytes, i);
  if (maxval == 0 || maxval > 255)
    throw GfmError(ErrorCode::ResolverFailure, "unsupported PPM maxval (must be 1..255)");
  info.maxval = static_cast<std::uint32_t>(maxval);

  const std::uint64_t samples = info.pixel_count() * 3;
  if (info.binary) {
    if (i >= bytes.size())
      throw GfmError(ErrorCode::ResolverFailure, "malformed PPM: truncated header");
    ++i;  // exactly one whitespace byte after maxval
    info.raster_offset = i;
    if (bytes.size() < info.raster_offset + samples)
      throw GfmError(ErrorCode::ResolverFailure, "malformed PPM: truncated raster");
  } else {
    info.sample_spans.reserve(samples);
    info.sample_values.reserve(samples);
    for (std::uint64_t s = 0; s < samples; ++s) {
      std::uint64_t begin = 0;
      const std::uint64_t v = detail::ppm_read_uint(bytes, i, &begin);
      if (v > info.maxval)
        throw GfmError(ErrorCode::ResolverFailure, "malformed PPM: sample exceeds maxval");
      info.sample_spans.emplace_back(begin, i);
      info.sample_values.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return info;
}

/// Byte spans of pixel (x, y): one contiguous run for P6, up to three sample
/// tokens for P3. Coordinates are absolute image coordinates.
inline std::vector<BitSpan> pixel_bit_spans(const PpmInfo& info, std::uint32_t x,
                                            std::uint32_t y) {
  const std::uint64_t p = static_cast<std::uint64_t>(y) * info.width + x;
  std::vector<BitSpan> out;
  if (info.binary) {
    const std::uint64_t b = info.raster_offset + p * 3;
    out.push_back(BitSpan{b * 8, (b + 3) * 8});
  } else {
    for (std::uint64_t s = p * 3; s < p * 3 + 3; ++s) {
      const auto [b0, b1] = info.sample_spans[s];
      out.push_back(BitSpan{b0 * 8, b1 * 8});
    }
  }
  return out;
}

inline BitSpanSet region_bits(const PpmInfo& info, std::uint32_t x, std::uint32_t y,
                              std::uint32_t w, std::uint32_t h) {
  std::vector<BitSpan> spans;
  for (std::uint32_t dy = 0; dy < h; ++dy) {
    if (info.binary) {
      const std::uint64_t p = (static_cast<std::uint64_t>(y) + dy) * info.width + x;
      const std::uint64_t b = info.raster_offset + p * 3;
      spans.push_back(BitSpan{b * 8, (b + static_cast<std::uint64_t>(w) * 3) * 8});
    } else {
      for (std::uint32_t dx = 0; dx < w; ++dx) {
        for (const BitSpan& s : pixel_bit_spans(info, x + dx, y + dy)) spans.push_back(s);
      }
    }
  }
  return BitSpanSet::of(std::move(spans));
}

inline RgbColor color_at(const PpmInfo& info, const std::vector<std::uint8_t>& bytes,
                         std::uint32_t x, std::uint32_t y) {
  const std::uint64_t p = static_cast<std::uint64_t>(y) * info.width + x;
  if (info.binary) {
    const std::uint64_t b = info.raster_offset + p * 3;
    return RgbColor{bytes[b], bytes[b + 1], bytes[b + 2]};
  }
  return RgbColor{info.sample_values[p * 3], info.sample_values[p * 3 + 1],
                  info.sample_values[p * 3 + 2]};
}

}  // namespace gfm
