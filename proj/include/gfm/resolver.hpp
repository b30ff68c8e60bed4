#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfm/artifact.hpp"
#include "gfm/builtin_indexers.hpp"
#include "gfm/error.hpp"
#include "gfm/grammar.hpp"
#include "gfm/indexer.hpp"

namespace gfm {

/// A resolution failure tagged with the 1-based index of the failing
/// expression segment.
class SegmentError : public GfmError {
 public:
  SegmentError(std::size_t segment, const GfmError& inner)
      : GfmError(inner.code(), "segment " + std::to_string(segment) + ": " + inner.message()),
        segment_(segment) {}

  std::size_t segment() const noexcept { return segment_; }

 private:
  std::size_t segment_;
};

struct TrailEntry {
  std::string segment;  // canonical segment text
  std::optional<Extent> extent;
  BitSpanSet bits;
};

struct ResolvedFragment {
  Fragment fragment;
  std::vector<TrailEntry> trail;
};

namespace detail {

inline Fragment resolve_on(const InformationArtifact& artifact, const Fragment& base,
                           const FragmentExpression& expr, const IndexerRegistry& registry);

inline Anchor build_anchor(const InformationArtifact& artifact, const Fragment& target,
                           const Segment& seg, const IndexerRegistry& registry) {
  Anchor anchor;
  anchor.indexer = seg.indexer;
  for (const ExprBinding& b : seg.bindings) {
    AnchorValue value;
    switch (b.value.kind) {
      case ExprValue::Kind::Integer:
        value = b.value.integer;
        break;
      case ExprValue::Kind::Decimal:
        value = b.value.decimal.value();
        break;
      case ExprValue::Kind::Text:
        value = b.value.text;
        break;
      case ExprValue::Kind::Color:
        value = b.value.color;
        break;
      case ExprValue::Kind::Nested:
        // Nested expressions resolve against the current chain target.
        value = resolve_on(artifact, target, b.value.nested.front(), registry);
        break;
    }
    anchor.bindings.push_back(AnchorBinding{b.name, std::move(value)});
  }
  return anchor;
}

inline Fragment resolve_on(const InformationArtifact& artifact, const Fragment& base,
                           const FragmentExpression& expr, const IndexerRegistry& registry) {
  Fragment cur = base;
  for (const Segment& seg : expr.segments) {
    const ResolveTarget target{artifact, cur};
    const Anchor anchor = build_anchor(artifact, cur, seg, registry);
    cur = apply_anchor(registry, target, anchor);
  }
  return cur;
}

}  // namespace detail

/// Evaluates an expression against an artifact: each segment applies to the
/// fragment produced so far, nested binding values are resolved first against
/// the same target. Errors carry the failing segment's index.
inline ResolvedFragment resolve(const InformationArtifact& artifact,
                                const FragmentExpression& expr,
                                const IndexerRegistry& registry = builtin_registry()) {
  ResolvedFragment out;
  Fragment cur = whole_fragment(artifact);
  for (std::size_t k = 0; k < expr.segments.size(); ++k) {
    const Segment& seg = expr.segments[k];
    try {
      const ResolveTarget target{artifact, cur};
      const Anchor anchor = detail::build_anchor(artifact, cur, seg, registry);
      cur = apply_anchor(registry, target, anchor);
    } catch (const GfmError& e) {
      throw SegmentError(k + 1, e);
    }
    out.trail.push_back(TrailEntry{print_segment(seg), cur.extent, cur.bits});
  }
  out.fragment = cur;
  return out;
}

inline ResolvedFragment resolve(const InformationArtifact& artifact, std::string_view expr_text,
                                const IndexerRegistry& registry = builtin_registry()) {
  return resolve(artifact, parse_expression(expr_text), registry);
}

struct IndexerListing {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;  // (name, domain)
  std::string output_kind;
  std::string taxonomy;
};

/// Catalog of indexers applicable to a media type; binary and id always
/// appear since every artifact has them.
inline std::vector<IndexerListing> list_indexers(MediaType media,
                                                 const IndexerRegistry& registry = builtin_registry()) {
  std::vector<IndexerListing> out;
  for (const auto* entry : registry.for_media(media)) {
    IndexerListing item;
    item.name = entry->spec.name;
    for (const IndexerParam& p : entry->spec.parameters)
      item.parameters.emplace_back(p.name, p.domain.describe());
    item.output_kind = std::string(to_string(entry->spec.output_kind));
    item.taxonomy = std::string(to_string(entry->spec.taxonomy));
    out.push_back(std::move(item));
  }
  return out;
}

inline nlohmann::json extent_json(const Extent& extent) {
  using nlohmann::json;
  struct Visitor {
    json operator()(const BitRangeExtent& e) const {
      return {{"kind", "bit-range"}, {"begin", e.begin}, {"end", e.end}};
    }
    json operator()(const ByteRangeExtent& e) const {
      return {{"kind", "byte-range"}, {"begin", e.begin}, {"end", e.end}};
    }
    json operator()(const CharRangeExtent& e) const {
      return {{"kind", "char-range"}, {"begin", e.begin}, {"end", e.end}};
    }
    json operator()(const PixelSetExtent& e) const {
      json px = json::array();
      for (const PixelCoord& p : e.pixels) px.push_back({p.x, p.y});
      return {{"kind", "pixel-set"}, {"pixels", px}};
    }
    json operator()(const RectExtent& e) const {
      return {{"kind", "rectangle"}, {"x", e.x}, {"y", e.y}, {"w", e.w}, {"h", e.h}};
    }
    json operator()(const TimeIntervalExtent& e) const {
      return {{"kind", "time-interval"}, {"start", e.start}, {"finish", e.finish}};
    }
    json operator()(const RowSetExtent& e) const {
      return {{"kind", "row-set"}, {"rows", e.rows}};
    }
    json operator()(const CellSetExtent& e) const {
      json cells = json::array();
      for (const CellCoord& c : e.cells) cells.push_back({c.row, c.col});
      return {{"kind", "cell-set"}, {"cells", cells}};
    }
  };
  return std::visit(Visitor{}, extent);
}

/// The resolution report consumed by the CLI.
inline nlohmann::json resolution_report(const InformationArtifact& artifact,
                                        const FragmentExpression& expr,
                                        const ResolvedFragment& resolved) {
  nlohmann::json spans = nlohmann::json::array();
  for (const BitSpan& s : resolved.fragment.bits.spans()) spans.push_back({s.begin, s.end});

  nlohmann::json trail = nlohmann::json::array();
  for (const TrailEntry& t : resolved.trail) {
    nlohmann::json entry{{"segment", t.segment}};
    entry["extent"] = t.extent ? extent_json(*t.extent) : nlohmann::json(nullptr);
    trail.push_back(std::move(entry));
  }

  return nlohmann::json{
      {"source", artifact.id},
      {"media_type", std::string(mime_name(artifact.media_type))},
      {"expression", print_expression(expr)},
      {"bit_spans", std::move(spans)},
      {"extent",
       resolved.fragment.extent ? extent_json(*resolved.fragment.extent) : nlohmann::json(nullptr)},
      {"trail", std::move(trail)},
  };
}

}  // namespace gfm
