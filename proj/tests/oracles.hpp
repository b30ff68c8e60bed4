#pragma once

// Independent oracles used to freeze expected values. These must stay
// decoupled from the library's resolution path: they re-derive results from
// first principles (per-bit loops, full scans, plain arithmetic).

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "gfm/bitspan.hpp"
#include "gfm/fragment.hpp"

namespace oracles {

/// Per-bit slicing: walk every addressed bit MSB-first, zero-pad the tail.
inline std::vector<std::uint8_t> bit_slice(const std::vector<std::uint8_t>& content,
                                           const std::vector<gfm::BitSpan>& spans) {
  std::vector<bool> stream;
  for (const gfm::BitSpan& s : spans)
    for (std::uint64_t b = s.begin; b < s.end; ++b)
      stream.push_back(((content[b / 8] >> (7 - b % 8)) & 1) != 0);
  std::vector<std::uint8_t> out((stream.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < stream.size(); ++i)
    if (stream[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
  return out;
}

/// Sample arithmetic for PCM intervals: frame = floor(seconds * rate),
/// byte = header + frame * block.
inline std::pair<std::uint64_t, std::uint64_t> wav_byte_range(std::uint32_t rate,
                                                              std::uint32_t block,
                                                              std::uint64_t data_offset,
                                                              double start, double finish) {
  const auto f0 = static_cast<std::uint64_t>(std::floor(start * rate));
  const auto f1 = static_cast<std::uint64_t>(std::floor(finish * rate));
  return {data_offset + f0 * block, data_offset + f1 * block};
}

/// Brute-force min/max bounding box over a pixel set.
inline std::optional<gfm::RectExtent> bounding_box(const std::vector<gfm::PixelCoord>& pixels) {
  if (pixels.empty()) return std::nullopt;
  std::uint32_t x0 = pixels.front().x, x1 = x0, y0 = pixels.front().y, y1 = y0;
  for (const gfm::PixelCoord& p : pixels) {
    if (p.x < x0) x0 = p.x;
    if (p.x > x1) x1 = p.x;
    if (p.y < y0) y0 = p.y;
    if (p.y > y1) y1 = p.y;
  }
  return gfm::RectExtent{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

/// Full scan of a P6 raster for exact color matches, raster order.
inline std::vector<gfm::PixelCoord> scan_color(const std::vector<std::uint8_t>& ppm_bytes,
                                               std::uint64_t raster_offset, std::uint32_t w,
                                               std::uint32_t h, std::uint8_t r, std::uint8_t g,
                                               std::uint8_t b) {
  std::vector<gfm::PixelCoord> out;
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x) {
      const std::uint64_t at = raster_offset + (static_cast<std::uint64_t>(y) * w + x) * 3;
      if (ppm_bytes[at] == r && ppm_bytes[at + 1] == g && ppm_bytes[at + 2] == b)
        out.push_back(gfm::PixelCoord{x, y});
    }
  return out;
}

}  // namespace oracles
