#pragma once

#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "gfm/artifact.hpp"
#include "gfm/indexer.hpp"
#include "gfm/media/csv.hpp"
#include "gfm/media/ppm.hpp"
#include "gfm/media/text.hpp"
#include "gfm/media/wav.hpp"

namespace gfm {

namespace detail {

inline std::int64_t int_arg(const Anchor& a, std::size_t i) {
  return std::get<std::int64_t>(a.bindings[i].value);
}

inline double seconds_arg(const Anchor& a, std::size_t i) {
  const AnchorValue& v = a.bindings[i].value;
  if (const auto* n = std::get_if<std::int64_t>(&v)) return static_cast<double>(*n);
  return std::get<double>(v);
}

inline const std::string& text_arg(const Anchor& a, std::size_t i) {
  return std::get<std::string>(a.bindings[i].value);
}

inline RgbColor color_arg(const Anchor& a, std::size_t i) {
  const AnchorValue& v = a.bindings[i].value;
  if (const auto* c = std::get_if<RgbColor>(&v)) return *c;
  return *named_color(std::get<std::string>(v));
}

inline const Fragment& fragment_arg(const Anchor& a, std::size_t i) {
  return std::get<Fragment>(a.bindings[i].value);
}

struct SpatialScope {
  PpmInfo info;
  std::uint32_t x0 = 0, y0 = 0, w = 0, h = 0;
};

inline SpatialScope spatial_scope(const ResolveTarget& t) {
  SpatialScope s;
  s.info = parse_ppm(t.artifact.content);
  if (const auto* rect = std::get_if<RectView>(&t.fragment.context)) {
    s.x0 = rect->x;
    s.y0 = rect->y;
    s.w = rect->w;
    s.h = rect->h;
  } else {
    s.w = s.info.width;
    s.h = s.info.height;
  }
  return s;
}

struct TemporalScope {
  WavInfo info;
  double start = 0.0, finish = 0.0;
};

inline TemporalScope temporal_scope(const ResolveTarget& t) {
  TemporalScope s;
  s.info = parse_wav(t.artifact.content);
  if (const auto* tv = std::get_if<TimeView>(&t.fragment.context)) {
    s.start = tv->start;
    s.finish = tv->finish;
  } else {
    s.finish = s.info.duration();
  }
  return s;
}

struct TextScope {
  TextIndex index;
  std::uint64_t c0 = 0, c1 = 0;
};

inline TextScope text_scope(const ResolveTarget& t) {
  TextScope s;
  s.index = index_text(t.artifact.content);
  if (const auto* tv = std::get_if<TextView>(&t.fragment.context)) {
    s.c0 = tv->char_begin;
    s.c1 = tv->char_end;
  } else {
    s.c1 = s.index.char_count();
  }
  return s;
}

struct CsvScope {
  CsvInfo info;
  std::vector<std::uint64_t> rows;      // visible data rows
  std::optional<std::uint32_t> column;  // visible column restriction
};

inline CsvScope csv_scope(const ResolveTarget& t) {
  CsvScope s;
  s.info = parse_csv(t.artifact.content);
  if (const auto* cv = std::get_if<CsvView>(&t.fragment.context)) {
    s.rows = cv->rows;
    s.column = cv->column;
  } else {
    s.rows.resize(s.info.rows.size());
    for (std::uint64_t r = 0; r < s.rows.size(); ++r) s.rows[r] = r;
  }
  return s;
}

inline BitSpanSet cell_bits(const CsvInfo& info, const std::vector<CellCoord>& cells) {
  std::vector<BitSpan> spans;
  for (const CellCoord& c : cells) {
    const CsvCell& cell = info.rows[c.row].cells[c.col];
    spans.push_back(BitSpan{cell.begin * 8, cell.end * 8});
  }
  return BitSpanSet::of(std::move(spans));
}

inline BitSpanSet record_bits(const CsvInfo& info, const std::vector<std::uint64_t>& rows) {
  std::vector<BitSpan> spans;
  for (std::uint64_t r : rows) {
    const CsvRecord& rec = info.rows[r];
    spans.push_back(BitSpan{rec.begin * 8, rec.end * 8});
  }
  return BitSpanSet::of(std::move(spans));
}

inline std::wstring to_wide(const std::vector<char32_t>& scalars, std::uint64_t c0,
                            std::uint64_t c1) {
  std::wstring out;
  out.reserve(c1 - c0);
  for (std::uint64_t c = c0; c < c1; ++c) out.push_back(static_cast<wchar_t>(scalars[c]));
  return out;
}

inline std::wstring pattern_to_wide(const std::string& pattern) {
  const std::vector<std::uint8_t> bytes(pattern.begin(), pattern.end());
  const TextIndex ix = index_text(bytes);  // patterns must be valid UTF-8 too
  return to_wide(ix.scalars, 0, ix.char_count());
}

inline void reject_backreferences(const std::string& pattern) {
  for (std::size_t i = 0; i + 1 < pattern.size(); ++i) {
    if (pattern[i] != '\\') continue;
    const char next = pattern[i + 1];
    if (next >= '1' && next <= '9')
      throw GfmError(ErrorCode::PatternError, "backreferences are not supported");
    ++i;  // skip the escaped char, whatever it is
  }
}

}  // namespace detail

/// Concrete bounds of the target for Definition-1 domain checks. Parses the
/// media header, so malformed content surfaces here as ResolverFailure.
inline TargetFacts target_facts(const ResolveTarget& t) {
  TargetFacts facts;
  facts.induced = induced_media_type(t.fragment, t.artifact.media_type);
  facts.bit_length = t.fragment.bits.total_bits();
  switch (facts.induced) {
    case MediaType::Ppm: {
      const auto scope = detail::spatial_scope(t);
      facts.width = scope.w;
      facts.height = scope.h;
      break;
    }
    case MediaType::Wav: {
      const auto scope = detail::temporal_scope(t);
      facts.duration = scope.finish - scope.start;
      break;
    }
    case MediaType::Text: {
      const auto scope = detail::text_scope(t);
      facts.chars = scope.c1 - scope.c0;
      facts.lines = lines_in(scope.index, scope.c0, scope.c1).size();
      facts.paragraphs = paragraphs_in(scope.index, scope.c0, scope.c1).size();
      break;
    }
    case MediaType::Csv: {
      const auto scope = detail::csv_scope(t);
      facts.rows = scope.rows.size();
      if (scope.column) {
        facts.columns = std::vector<std::string>{scope.info.columns[*scope.column]};
      } else {
        facts.columns = scope.info.columns;
      }
      break;
    }
    case MediaType::Octet:
    default:
      break;
  }
  return facts;
}

namespace detail {

inline Fragment resolve_pixel(const ResolveTarget& t, const Anchor& a) {
  const SpatialScope scope = spatial_scope(t);
  const auto x = scope.x0 + static_cast<std::uint32_t>(int_arg(a, 0));
  const auto y = scope.y0 + static_cast<std::uint32_t>(int_arg(a, 1));
  Fragment f;
  f.source = t.artifact.id;
  f.bits = BitSpanSet::of(pixel_bit_spans(scope.info, x, y));
  f.extent = PixelSetExtent{{PixelCoord{x, y}}};
  f.context = RectView{x, y, 1, 1};
  return f;
}

inline Fragment resolve_region(const ResolveTarget& t, const Anchor& a) {
  const SpatialScope scope = spatial_scope(t);
  const auto x = static_cast<std::uint32_t>(int_arg(a, 0));
  const auto y = static_cast<std::uint32_t>(int_arg(a, 1));
  const auto w = static_cast<std::uint32_t>(int_arg(a, 2));
  const auto h = static_cast<std::uint32_t>(int_arg(a, 3));
  if (x + w > scope.w || y + h > scope.h)
    throw GfmError(ErrorCode::DomainViolation, "region exceeds image bounds");
  const RectExtent rect{scope.x0 + x, scope.y0 + y, w, h};
  Fragment f;
  f.source = t.artifact.id;
  f.bits = region_bits(scope.info, rect.x, rect.y, rect.w, rect.h);
  f.extent = rect;
  f.context = RectView{rect.x, rect.y, rect.w, rect.h};
  return f;
}

inline Fragment resolve_colormask(const ResolveTarget& t, const Anchor& a) {
  const SpatialScope scope = spatial_scope(t);
  const RgbColor wanted = color_arg(a, 0);
  PixelSetExtent extent;
  std::vector<BitSpan> spans;
  for (std::uint32_t dy = 0; dy < scope.h; ++dy) {
    for (std::uint32_t dx = 0; dx < scope.w; ++dx) {
      const std::uint32_t x = scope.x0 + dx, y = scope.y0 + dy;
      if (color_at(scope.info, t.artifact.content, x, y) == wanted) {
        extent.pixels.push_back(PixelCoord{x, y});
        for (const BitSpan& s : pixel_bit_spans(scope.info, x, y)) spans.push_back(s);
      }
    }
  }
  Fragment f;
  f.source = t.artifact.id;
  f.bits = BitSpanSet::of(std::move(spans));
  f.extent = std::move(extent);
  f.context = RawView{};
  return f;
}

inline Fragment resolve_pbounding(const ResolveTarget& t, const Anchor& a) {
  const Fragment& input = fragment_arg(a, 0);
  const auto& pixels = std::get<PixelSetExtent>(*input.extent).pixels;
  if (pixels.empty())
    throw GfmError(ErrorCode::EmptyInput, "bounding rectangle of an empty pixel set");
  std::uint32_t x0 = pixels.front().x, x1 = x0, y0 = pixels.front().y, y1 = y0;
  for (const PixelCoord& p : pixels) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const SpatialScope scope = spatial_scope(t);
  const RectExtent rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  Fragment f;
  f.source = t.artifact.id;
  f.bits = region_bits(scope.info, rect.x, rect.y, rect.w, rect.h);
  f.extent = rect;
  f.context = RectView{rect.x, rect.y, rect.w, rect.h};
  return f;
}

inline Fragment resolve_time(const ResolveTarget& t, const Anchor& a) {
  const TemporalScope scope = temporal_scope(t);
  const double s = seconds_arg(a, 0);
  const double f = seconds_arg(a, 1);
  if (f <= s)
    throw GfmError(ErrorCode::DomainViolation, "interval finish must exceed start");
  const double abs_s = scope.start + s;
  const double abs_f = scope.start + f;
  const auto [b0, b1] = time_interval_bytes(scope.info, abs_s, abs_f);
  Fragment out;
  out.source = t.artifact.id;
  out.bits = BitSpanSet::single(b0 * 8, b1 * 8);
  out.extent = TimeIntervalExtent{abs_s, abs_f};
  out.context = TimeView{abs_s, abs_f};
  return out;
}

inline Fragment char_range_fragment(const ResolveTarget& t, const TextIndex& ix,
                                    std::uint64_t c0, std::uint64_t c1) {
  const auto [b0, b1] = ix.byte_range(c0, c1);
  Fragment f;
  f.source = t.artifact.id;
  f.bits = BitSpanSet::single(b0 * 8, b1 * 8);
  f.extent = CharRangeExtent{c0, c1};
  f.context = TextView{c0, c1};
  return f;
}

inline Fragment resolve_char(const ResolveTarget& t, const Anchor& a) {
  const TextScope scope = text_scope(t);
  const std::uint64_t k = scope.c0 + static_cast<std::uint64_t>(int_arg(a, 0));
  return char_range_fragment(t, scope.index, k, k + 1);
}

inline Fragment resolve_line(const ResolveTarget& t, const Anchor& a) {
  const TextScope scope = text_scope(t);
  const auto lines = lines_in(scope.index, scope.c0, scope.c1);
  const CharRange r = lines[static_cast<std::size_t>(int_arg(a, 0))];
  return char_range_fragment(t, scope.index, r.begin, r.end);
}

inline Fragment resolve_paragraph(const ResolveTarget& t, const Anchor& a) {
  const TextScope scope = text_scope(t);
  const auto paras = paragraphs_in(scope.index, scope.c0, scope.c1);
  const CharRange r = paras[static_cast<std::size_t>(int_arg(a, 0))];
  return char_range_fragment(t, scope.index, r.begin, r.end);
}

inline Fragment resolve_match(const ResolveTarget& t, const Anchor& a) {
  const TextScope scope = text_scope(t);
  const std::string& pattern = text_arg(a, 0);
  const std::uint64_t n = static_cast<std::uint64_t>(int_arg(a, 1));

  reject_backreferences(pattern);
  std::wregex re;
  try {
    re = std::wregex(pattern_to_wide(pattern));
  } catch (const std::regex_error& e) {
    throw GfmError(ErrorCode::PatternError, e.what());
  }

  // Matching runs over decoded scalars so positions are char indices and
  // '.' consumes one char, not one byte.
  const std::wstring hay = to_wide(scope.index.scalars, scope.c0, scope.c1);
  std::uint64_t seen = 0;
  for (auto it = std::wsregex_iterator(hay.begin(), hay.end(), re);
       it != std::wsregex_iterator(); ++it, ++seen) {
    if (seen == n) {
      const std::uint64_t m0 = scope.c0 + static_cast<std::uint64_t>(it->position(0));
      const std::uint64_t m1 = m0 + static_cast<std::uint64_t>(it->length(0));
      return char_range_fragment(t, scope.index, m0, m1);
    }
  }
  throw GfmError(ErrorCode::NoMatch, "pattern has " + std::to_string(seen) +
                                         " matches, wanted match " + std::to_string(n));
}

inline Fragment csv_fragment(const ResolveTarget& t, const CsvScope& scope,
                             std::vector<std::uint64_t> rows,
                             std::optional<std::uint32_t> column) {
  Fragment f;
  f.source = t.artifact.id;
  if (column) {
    std::vector<CellCoord> cells;
    cells.reserve(rows.size());
    for (std::uint64_t r : rows) cells.push_back(CellCoord{r, *column});
    f.bits = cell_bits(scope.info, cells);
    f.extent = CellSetExtent{std::move(cells)};
  } else {
    f.bits = record_bits(scope.info, rows);
    f.extent = RowSetExtent{rows};
  }
  f.context = CsvView{std::move(rows), column};
  return f;
}

inline Fragment resolve_row(const ResolveTarget& t, const Anchor& a) {
  const CsvScope scope = csv_scope(t);
  const std::uint64_t r = scope.rows[static_cast<std::size_t>(int_arg(a, 0))];
  return csv_fragment(t, scope, {r}, scope.column);
}

inline std::uint32_t visible_column(const CsvScope& scope, const std::string& name) {
  const auto c = scope.info.column_index(name);
  if (!c || (scope.column && *c != *scope.column))
    throw GfmError(ErrorCode::UnknownColumn, "no visible column named '" + name + "'");
  return *c;
}

inline Fragment resolve_col(const ResolveTarget& t, const Anchor& a) {
  const CsvScope scope = csv_scope(t);
  const std::uint32_t c = visible_column(scope, text_arg(a, 0));
  return csv_fragment(t, scope, scope.rows, c);
}

inline Fragment resolve_cell(const ResolveTarget& t, const Anchor& a) {
  const CsvScope scope = csv_scope(t);
  const std::uint64_t r = scope.rows[static_cast<std::size_t>(int_arg(a, 0))];
  const std::uint32_t c = visible_column(scope, text_arg(a, 1));
  return csv_fragment(t, scope, {r}, c);
}

inline Fragment resolve_where(const ResolveTarget& t, const Anchor& a) {
  const CsvScope scope = csv_scope(t);
  const std::uint32_t c = visible_column(scope, text_arg(a, 0));
  const std::string& wanted = text_arg(a, 1);
  std::vector<std::uint64_t> matching;
  for (std::uint64_t r : scope.rows)
    if (scope.info.rows[r].cells[c].value == wanted) matching.push_back(r);
  return csv_fragment(t, scope, std::move(matching), scope.column);
}

}  // namespace detail

/// The built-in catalog: binary and id (implicit in every registry) plus the
/// media-specific indexers for PPM, WAV, text and CSV.
inline const IndexerRegistry& builtin_registry() {
  static const IndexerRegistry registry = [] {
    IndexerRegistry r;

    auto spec = [](std::string name, MediaType media, std::vector<IndexerParam> params,
                   ExtentKind out, IndexerClass cls) {
      IndexerSpec s;
      s.name = std::move(name);
      s.applies_to = media;
      s.parameters = std::move(params);
      s.output_kind = out;
      s.taxonomy = cls;
      return s;
    };

    r.add(spec("pixel", MediaType::Ppm,
               {{"x", DomainSpec::int_range(0, Bound::ImageWidth)},
                {"y", DomainSpec::int_range(0, Bound::ImageHeight)}},
               ExtentKind::PixelSet, IndexerClass::Vector),
          detail::resolve_pixel);
    r.add(spec("region", MediaType::Ppm,
               {{"x", DomainSpec::int_range(0, Bound::ImageWidth)},
                {"y", DomainSpec::int_range(0, Bound::ImageHeight)},
                {"w", DomainSpec::int_range(1, Bound::ImageWidth, 0, true)},
                {"h", DomainSpec::int_range(1, Bound::ImageHeight, 0, true)}},
               ExtentKind::Rectangle, IndexerClass::SpatioTemporal),
          detail::resolve_region);
    r.add(spec("colormask", MediaType::Ppm, {{"color", DomainSpec::color_literal()}},
               ExtentKind::PixelSet, IndexerClass::Query),
          detail::resolve_colormask);
    r.add(spec("pbounding", MediaType::Ppm,
               {{"pixels", DomainSpec::fragment_valued({ExtentKind::PixelSet})}},
               ExtentKind::Rectangle, IndexerClass::SpatioTemporal),
          detail::resolve_pbounding);

    r.add(spec("time", MediaType::Wav,
               {{"s", DomainSpec::seconds()}, {"f", DomainSpec::seconds()}},
               ExtentKind::TimeInterval, IndexerClass::SpatioTemporal),
          detail::resolve_time);

    r.add(spec("char", MediaType::Text, {{"k", DomainSpec::int_range(0, Bound::CharCount)}},
               ExtentKind::CharRange, IndexerClass::Vector),
          detail::resolve_char);
    r.add(spec("line", MediaType::Text, {{"i", DomainSpec::int_range(0, Bound::LineCount)}},
               ExtentKind::CharRange, IndexerClass::Vector),
          detail::resolve_line);
    r.add(spec("paragraph", MediaType::Text,
               {{"i", DomainSpec::int_range(0, Bound::ParagraphCount)}},
               ExtentKind::CharRange, IndexerClass::Vector),
          detail::resolve_paragraph);
    r.add(spec("match", MediaType::Text,
               {{"pattern", DomainSpec::free_text()},
                {"n", DomainSpec::int_range(0, Bound::Unbounded)}},
               ExtentKind::CharRange, IndexerClass::Query),
          detail::resolve_match);

    r.add(spec("row", MediaType::Csv, {{"i", DomainSpec::int_range(0, Bound::RowCount)}},
               ExtentKind::RowSet, IndexerClass::Vector),
          detail::resolve_row);
    r.add(spec("col", MediaType::Csv, {{"name", DomainSpec::csv_column()}}, ExtentKind::Cell,
               IndexerClass::Dictionary),
          detail::resolve_col);
    r.add(spec("cell", MediaType::Csv,
               {{"row", DomainSpec::int_range(0, Bound::RowCount)},
                {"col", DomainSpec::csv_column()}},
               ExtentKind::Cell, IndexerClass::Dictionary),
          detail::resolve_cell);
    r.add(spec("where", MediaType::Csv,
               {{"column", DomainSpec::csv_column()}, {"equals", DomainSpec::free_text()}},
               ExtentKind::RowSet, IndexerClass::Query),
          detail::resolve_where);
    return r;
  }();
  return registry;
}

/// Validates and applies one anchor against a target, dispatching on the
/// target's induced media type.
inline Fragment apply_anchor(const IndexerRegistry& registry, const ResolveTarget& target,
                             const Anchor& anchor) {
  const TargetFacts facts = target_facts(target);
  const IndexerRegistry::Entry* entry = registry.find(anchor.indexer, facts.induced);
  if (!entry) {
    if (registry.has_name(anchor.indexer))
      throw GfmError(ErrorCode::MediaTypeMismatch,
                     "indexer '" + anchor.indexer + "' does not apply to " +
                         std::string(mime_name(facts.induced)));
    throw GfmError(ErrorCode::UnknownIndexer, "no indexer named '" + anchor.indexer + "'");
  }
  return apply(*entry, target, anchor, facts);
}

/// Re-derives the bit spans a structured extent denotes. Used to keep
/// extents and bit sets consistent.
inline BitSpanSet extent_bits(const Extent& extent, const InformationArtifact& a) {
  struct Visitor {
    const InformationArtifact& a;

    BitSpanSet operator()(const BitRangeExtent& e) const {
      return BitSpanSet::single(e.begin, e.end);
    }
    BitSpanSet operator()(const ByteRangeExtent& e) const {
      return BitSpanSet::single(e.begin * 8, e.end * 8);
    }
    BitSpanSet operator()(const CharRangeExtent& e) const {
      const TextIndex ix = index_text(a.content);
      const auto [b0, b1] = ix.byte_range(e.begin, e.end);
      return BitSpanSet::single(b0 * 8, b1 * 8);
    }
    BitSpanSet operator()(const PixelSetExtent& e) const {
      const PpmInfo info = parse_ppm(a.content);
      std::vector<BitSpan> spans;
      for (const PixelCoord& p : e.pixels)
        for (const BitSpan& s : pixel_bit_spans(info, p.x, p.y)) spans.push_back(s);
      return BitSpanSet::of(std::move(spans));
    }
    BitSpanSet operator()(const RectExtent& e) const {
      const PpmInfo info = parse_ppm(a.content);
      return region_bits(info, e.x, e.y, e.w, e.h);
    }
    BitSpanSet operator()(const TimeIntervalExtent& e) const {
      const WavInfo info = parse_wav(a.content);
      const auto [b0, b1] = time_interval_bytes(info, e.start, e.finish);
      return BitSpanSet::single(b0 * 8, b1 * 8);
    }
    BitSpanSet operator()(const RowSetExtent& e) const {
      const CsvInfo info = parse_csv(a.content);
      std::vector<BitSpan> spans;
      for (std::uint64_t r : e.rows)
        spans.push_back(BitSpan{info.rows[r].begin * 8, info.rows[r].end * 8});
      return BitSpanSet::of(std::move(spans));
    }
    BitSpanSet operator()(const CellSetExtent& e) const {
      const CsvInfo info = parse_csv(a.content);
      std::vector<BitSpan> spans;
      for (const CellCoord& c : e.cells) {
        const CsvCell& cell = info.rows[c.row].cells[c.col];
        spans.push_back(BitSpan{cell.begin * 8, cell.end * 8});
      }
      return BitSpanSet::of(std::move(spans));
    }
  };
  return std::visit(Visitor{a}, extent);
}

}  // namespace gfm
