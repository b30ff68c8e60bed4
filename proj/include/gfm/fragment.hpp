#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gfm/bitspan.hpp"

namespace gfm {

enum class MediaType { Octet, Text, Ppm, Wav, Csv };

inline std::string_view mime_name(MediaType t) {
  switch (t) {
    case MediaType::Octet: return "application/octet-stream";
    case MediaType::Text: return "text/plain;charset=utf-8";
    case MediaType::Ppm: return "image/x-portable-pixmap";
    case MediaType::Wav: return "audio/wav";
    case MediaType::Csv: return "text/csv";
  }
  return "application/octet-stream";
}

inline std::optional<MediaType> media_type_from_mime(std::string_view mime) {
  if (mime == "application/octet-stream") return MediaType::Octet;
  if (mime == "text/plain;charset=utf-8" || mime == "text/plain") return MediaType::Text;
  if (mime == "image/x-portable-pixmap") return MediaType::Ppm;
  if (mime == "audio/wav" || mime == "audio/x-wav") return MediaType::Wav;
  if (mime == "text/csv") return MediaType::Csv;
  return std::nullopt;
}

struct PixelCoord {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  auto operator<=>(const PixelCoord&) const = default;
};

struct CellCoord {
  std::uint64_t row = 0;
  std::uint32_t col = 0;
  auto operator<=>(const CellCoord&) const = default;
};

// Structured extents. Coordinates are always absolute within the source
// artifact (pixel coordinates in the full image, char indices in the full
// text, seconds from the start of the audio, data-row indices of the table).

struct BitRangeExtent {
  std::uint64_t begin = 0, end = 0;
  friend bool operator==(const BitRangeExtent&, const BitRangeExtent&) = default;
};
struct ByteRangeExtent {
  std::uint64_t begin = 0, end = 0;
  friend bool operator==(const ByteRangeExtent&, const ByteRangeExtent&) = default;
};
struct CharRangeExtent {
  std::uint64_t begin = 0, end = 0;
  friend bool operator==(const CharRangeExtent&, const CharRangeExtent&) = default;
};
struct PixelSetExtent {
  std::vector<PixelCoord> pixels;  // raster order
  friend bool operator==(const PixelSetExtent&, const PixelSetExtent&) = default;
};
struct RectExtent {
  std::uint32_t x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const RectExtent&, const RectExtent&) = default;
};
struct TimeIntervalExtent {
  double start = 0.0, finish = 0.0;  // seconds, [start, finish)
  friend bool operator==(const TimeIntervalExtent&, const TimeIntervalExtent&) = default;
};
struct RowSetExtent {
  std::vector<std::uint64_t> rows;
  friend bool operator==(const RowSetExtent&, const RowSetExtent&) = default;
};
struct CellSetExtent {
  std::vector<CellCoord> cells;
  friend bool operator==(const CellSetExtent&, const CellSetExtent&) = default;
};

using Extent = std::variant<BitRangeExtent, ByteRangeExtent, CharRangeExtent, PixelSetExtent,
                            RectExtent, TimeIntervalExtent, RowSetExtent, CellSetExtent>;

// Fragment context: the view a sub-anchor's coordinates are relative to.
// WholeView is the untouched artifact; RawView is an opaque bit stream
// (scattered pixel sets, binary selections) on which only binary/id apply.

struct WholeView {
  friend bool operator==(const WholeView&, const WholeView&) = default;
};
struct RawView {
  friend bool operator==(const RawView&, const RawView&) = default;
};
struct RectView {
  std::uint32_t x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const RectView&, const RectView&) = default;
};
struct TimeView {
  double start = 0.0, finish = 0.0;
  friend bool operator==(const TimeView&, const TimeView&) = default;
};
struct TextView {
  std::uint64_t char_begin = 0, char_end = 0;
  friend bool operator==(const TextView&, const TextView&) = default;
};
struct CsvView {
  std::vector<std::uint64_t> rows;       // visible data rows, in display order
  std::optional<std::uint32_t> column;   // set when restricted to one column
  friend bool operator==(const CsvView&, const CsvView&) = default;
};

using FragmentView = std::variant<WholeView, RawView, RectView, TimeView, TextView, CsvView>;

/// A resolved part of an artifact: canonical bit spans plus an optional
/// structured extent and the context needed to re-index relative sub-anchors.
struct Fragment {
  std::string source;                   // owning artifact id
  BitSpanSet bits;
  std::optional<Extent> extent;
  FragmentView context = WholeView{};

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

/// Media type a fragment induces when treated as an artifact of its own.
inline MediaType induced_media_type(const Fragment& f, MediaType source_type) {
  struct Visitor {
    MediaType source;
    MediaType operator()(const WholeView&) const { return source; }
    MediaType operator()(const RawView&) const { return MediaType::Octet; }
    MediaType operator()(const RectView&) const { return source; }
    MediaType operator()(const TimeView&) const { return MediaType::Wav; }
    MediaType operator()(const TextView&) const { return MediaType::Text; }
    MediaType operator()(const CsvView&) const { return MediaType::Csv; }
  };
  return std::visit(Visitor{source_type}, f.context);
}

}  // namespace gfm
