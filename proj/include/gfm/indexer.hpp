#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gfm/artifact.hpp"
#include "gfm/error.hpp"
#include "gfm/fragment.hpp"
#include "gfm/media/ppm.hpp"

namespace gfm {

enum class ExtentKind {
  Bit,
  ByteRange,
  CharRange,
  PixelSet,
  Rectangle,
  TimeInterval,
  RowSet,
  Cell,
  Fragment,  // passes the input fragment's extent through (identity)
};

inline std::string_view to_string(ExtentKind k) {
  switch (k) {
    case ExtentKind::Bit: return "bit";
    case ExtentKind::ByteRange: return "byte-range";
    case ExtentKind::CharRange: return "char-range";
    case ExtentKind::PixelSet: return "pixel-set";
    case ExtentKind::Rectangle: return "rectangle";
    case ExtentKind::TimeInterval: return "time-interval";
    case ExtentKind::RowSet: return "row-set";
    case ExtentKind::Cell: return "cell";
    case ExtentKind::Fragment: return "fragment";
  }
  return "bit";
}

inline ExtentKind extent_kind(const Extent& e) {
  struct Visitor {
    ExtentKind operator()(const BitRangeExtent&) const { return ExtentKind::Bit; }
    ExtentKind operator()(const ByteRangeExtent&) const { return ExtentKind::ByteRange; }
    ExtentKind operator()(const CharRangeExtent&) const { return ExtentKind::CharRange; }
    ExtentKind operator()(const PixelSetExtent&) const { return ExtentKind::PixelSet; }
    ExtentKind operator()(const RectExtent&) const { return ExtentKind::Rectangle; }
    ExtentKind operator()(const TimeIntervalExtent&) const { return ExtentKind::TimeInterval; }
    ExtentKind operator()(const RowSetExtent&) const { return ExtentKind::RowSet; }
    ExtentKind operator()(const CellSetExtent&) const { return ExtentKind::Cell; }
  };
  return std::visit(Visitor{}, e);
}

enum class IndexerClass { Binary, Identity, Vector, Dictionary, SpatioTemporal, Query };

inline std::string_view to_string(IndexerClass c) {
  switch (c) {
    case IndexerClass::Binary: return "binary";
    case IndexerClass::Identity: return "identity";
    case IndexerClass::Vector: return "vector";
    case IndexerClass::Dictionary: return "dictionary";
    case IndexerClass::SpatioTemporal: return "spatio-temporal";
    case IndexerClass::Query: return "query";
  }
  return "vector";
}

/// Upper bound of an integer domain; artifact-dependent bounds are resolved
/// against the target before membership tests.
enum class Bound {
  Const,
  Unbounded,
  BitLength,
  ImageWidth,
  ImageHeight,
  DurationSeconds,
  CharCount,
  LineCount,
  ParagraphCount,
  RowCount,
};

struct DomainSpec {
  enum class Kind { IntegerRange, SymbolEnum, FreeText, ColorLiteral, FragmentValued };

  Kind kind = Kind::IntegerRange;

  // IntegerRange: [lo, hi) by default, [lo, hi] when hi_inclusive.
  std::int64_t lo = 0;
  Bound hi_source = Bound::Const;
  std::int64_t hi_value = 0;
  bool hi_inclusive = false;
  bool decimal_seconds = false;  // time-valued: decimals accepted

  // SymbolEnum
  bool symbols_from_header = false;  // CSV header names
  std::vector<std::string> symbols;

  // FragmentValued
  std::vector<ExtentKind> accepted_extents;

  static DomainSpec int_range(std::int64_t lo, Bound hi, std::int64_t hi_value = 0,
                              bool inclusive = false) {
    DomainSpec d;
    d.kind = Kind::IntegerRange;
    d.lo = lo;
    d.hi_source = hi;
    d.hi_value = hi_value;
    d.hi_inclusive = inclusive;
    return d;
  }
  static DomainSpec seconds() {
    DomainSpec d = int_range(0, Bound::DurationSeconds, 0, true);
    d.decimal_seconds = true;
    return d;
  }
  static DomainSpec symbol_enum(std::vector<std::string> values) {
    DomainSpec d;
    d.kind = Kind::SymbolEnum;
    d.symbols = std::move(values);
    return d;
  }
  static DomainSpec csv_column() {
    DomainSpec d;
    d.kind = Kind::SymbolEnum;
    d.symbols_from_header = true;
    return d;
  }
  static DomainSpec free_text() {
    DomainSpec d;
    d.kind = Kind::FreeText;
    return d;
  }
  static DomainSpec color_literal() {
    DomainSpec d;
    d.kind = Kind::ColorLiteral;
    return d;
  }
  static DomainSpec fragment_valued(std::vector<ExtentKind> kinds) {
    DomainSpec d;
    d.kind = Kind::FragmentValued;
    d.accepted_extents = std::move(kinds);
    return d;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::IntegerRange: {
        std::string hi;
        switch (hi_source) {
          case Bound::Const: hi = std::to_string(hi_value); break;
          case Bound::Unbounded: hi = "inf"; break;
          case Bound::BitLength: hi = "bit_length"; break;
          case Bound::ImageWidth: hi = "width"; break;
          case Bound::ImageHeight: hi = "height"; break;
          case Bound::DurationSeconds: hi = "duration"; break;
          case Bound::CharCount: hi = "chars"; break;
          case Bound::LineCount: hi = "lines"; break;
          case Bound::ParagraphCount: hi = "paragraphs"; break;
          case Bound::RowCount: hi = "rows"; break;
        }
        const std::string open = decimal_seconds ? "seconds[" : "int[";
        return open + std::to_string(lo) + "," + hi + (hi_inclusive ? "]" : ")");
      }
      case Kind::SymbolEnum: {
        if (symbols_from_header) return "symbol{column}";
        std::string s = "symbol{";
        for (std::size_t i = 0; i < symbols.size(); ++i)
          s += (i ? "," : "") + symbols[i];
        return s + "}";
      }
      case Kind::FreeText: return "text";
      case Kind::ColorLiteral: return "color";
      case Kind::FragmentValued: {
        std::string s = "fragment(";
        for (std::size_t i = 0; i < accepted_extents.size(); ++i)
          s += std::string(i ? "," : "") + std::string(to_string(accepted_extents[i]));
        return s + ")";
      }
    }
    return "int";
  }
};

struct IndexerParam {
  std::string name;
  DomainSpec domain;
};

struct IndexerSpec {
  std::string name;
  std::optional<MediaType> applies_to;  // nullopt = any media type
  std::vector<IndexerParam> parameters;
  ExtentKind output_kind = ExtentKind::Bit;
  IndexerClass taxonomy = IndexerClass::Vector;
};

using AnchorValue = std::variant<std::int64_t, double, std::string, RgbColor, Fragment>;

inline std::string_view value_kind_name(const AnchorValue& v) {
  switch (v.index()) {
    case 0: return "integer";
    case 1: return "decimal";
    case 2: return "text";
    case 3: return "color";
    default: return "fragment";
  }
}

struct AnchorBinding {
  std::string name;
  AnchorValue value;
};

/// An indexer name with concrete token bindings, one fragment's address.
struct Anchor {
  std::string indexer;
  std::vector<AnchorBinding> bindings;
};

/// Concrete bounds for artifact-dependent domains, computed from the target
/// (fragment views shrink them to the visible part).
struct TargetFacts {
  MediaType induced = MediaType::Octet;
  std::uint64_t bit_length = 0;
  std::optional<std::uint32_t> width, height;
  std::optional<double> duration;
  std::optional<std::uint64_t> chars, lines, paragraphs, rows;
  std::optional<std::vector<std::string>> columns;
};

struct Violation {
  ErrorCode code = ErrorCode::DomainViolation;
  std::string parameter;
  std::string message;
};

struct ValidationVerdict {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }

  std::string summary() const {
    std::string s;
    for (const Violation& v : violations) {
      if (!s.empty()) s += "; ";
      s += std::string(to_string(v.code));
      if (!v.parameter.empty()) s += "(" + v.parameter + ")";
      s += ": " + v.message;
    }
    return s;
  }
};

class ValidationError : public GfmError {
 public:
  explicit ValidationError(ValidationVerdict verdict)
      : GfmError(verdict.violations.empty() ? ErrorCode::DomainViolation
                                            : verdict.violations.front().code,
                 verdict.summary()),
        verdict_(std::move(verdict)) {}

  const ValidationVerdict& verdict() const noexcept { return verdict_; }

 private:
  ValidationVerdict verdict_;
};

inline std::optional<RgbColor> named_color(std::string_view name) {
  if (name == "red") return RgbColor{255, 0, 0};
  if (name == "green") return RgbColor{0, 255, 0};
  if (name == "blue") return RgbColor{0, 0, 255};
  if (name == "black") return RgbColor{0, 0, 0};
  if (name == "white") return RgbColor{255, 255, 255};
  return std::nullopt;
}

namespace detail {

inline std::optional<std::int64_t> resolve_int_bound(Bound b, std::int64_t const_value,
                                                     const TargetFacts& facts) {
  auto opt = [](const auto& o) -> std::optional<std::int64_t> {
    if (!o) return std::nullopt;
    return static_cast<std::int64_t>(*o);
  };
  switch (b) {
    case Bound::Const: return const_value;
    case Bound::Unbounded: return std::nullopt;
    case Bound::BitLength: return static_cast<std::int64_t>(facts.bit_length);
    case Bound::ImageWidth: return opt(facts.width);
    case Bound::ImageHeight: return opt(facts.height);
    case Bound::CharCount: return opt(facts.chars);
    case Bound::LineCount: return opt(facts.lines);
    case Bound::ParagraphCount: return opt(facts.paragraphs);
    case Bound::RowCount: return opt(facts.rows);
    case Bound::DurationSeconds: return std::nullopt;
  }
  return std::nullopt;
}

inline void check_domain(const AnchorValue& value, const DomainSpec& domain,
                         const std::string& param, const TargetFacts& facts,
                         std::vector<Violation>& out) {
  auto violate = [&](ErrorCode code, std::string message) {
    out.push_back(Violation{code, param, std::move(message)});
  };

  switch (domain.kind) {
    case DomainSpec::Kind::IntegerRange: {
      if (domain.decimal_seconds) {
        double v;
        if (const auto* i = std::get_if<std::int64_t>(&value)) {
          v = static_cast<double>(*i);
        } else if (const auto* d = std::get_if<double>(&value)) {
          v = *d;
        } else {
          violate(ErrorCode::DomainViolation,
                  "expected a number of seconds, got " + std::string(value_kind_name(value)));
          return;
        }
        if (v < static_cast<double>(domain.lo)) {
          violate(ErrorCode::DomainViolation, "value below " + std::to_string(domain.lo));
        } else if (facts.duration && v > *facts.duration) {
          violate(ErrorCode::DomainViolation,
                  "value beyond duration " + std::to_string(*facts.duration));
        }
        return;
      }
      const auto* i = std::get_if<std::int64_t>(&value);
      if (!i) {
        violate(ErrorCode::DomainViolation,
                "expected integer, got " + std::string(value_kind_name(value)));
        return;
      }
      if (*i < domain.lo) {
        violate(ErrorCode::DomainViolation, "value below " + std::to_string(domain.lo));
        return;
      }
      const auto hi = resolve_int_bound(domain.hi_source, domain.hi_value, facts);
      if (hi && (domain.hi_inclusive ? *i > *hi : *i >= *hi))
        violate(ErrorCode::DomainViolation,
                "value must be in [" + std::to_string(domain.lo) + "," + std::to_string(*hi) +
                    (domain.hi_inclusive ? "]" : ")"));
      return;
    }
    case DomainSpec::Kind::SymbolEnum: {
      const auto* t = std::get_if<std::string>(&value);
      if (!t) {
        violate(domain.symbols_from_header ? ErrorCode::UnknownColumn : ErrorCode::DomainViolation,
                "expected symbol, got " + std::string(value_kind_name(value)));
        return;
      }
      const std::vector<std::string>* pool = &domain.symbols;
      if (domain.symbols_from_header) {
        if (!facts.columns) return;  // media mismatch already reported
        pool = &*facts.columns;
      }
      for (const std::string& s : *pool)
        if (s == *t) return;
      violate(domain.symbols_from_header ? ErrorCode::UnknownColumn : ErrorCode::DomainViolation,
              "'" + *t + "' is not an admissible symbol");
      return;
    }
    case DomainSpec::Kind::FreeText: {
      if (!std::holds_alternative<std::string>(value))
        violate(ErrorCode::DomainViolation,
                "expected text, got " + std::string(value_kind_name(value)));
      return;
    }
    case DomainSpec::Kind::ColorLiteral: {
      if (std::holds_alternative<RgbColor>(value)) return;
      if (const auto* t = std::get_if<std::string>(&value)) {
        if (named_color(*t)) return;
        violate(ErrorCode::DomainViolation, "'" + *t + "' is not a known color name");
        return;
      }
      violate(ErrorCode::DomainViolation,
              "expected color, got " + std::string(value_kind_name(value)));
      return;
    }
    case DomainSpec::Kind::FragmentValued: {
      const auto* f = std::get_if<Fragment>(&value);
      if (!f) {
        violate(ErrorCode::NestedKindMismatch,
                "expected a fragment, got " + std::string(value_kind_name(value)));
        return;
      }
      if (!f->extent) {
        violate(ErrorCode::NestedKindMismatch, "fragment has no structured extent");
        return;
      }
      const ExtentKind k = extent_kind(*f->extent);
      for (ExtentKind want : domain.accepted_extents)
        if (want == k) return;
      violate(ErrorCode::NestedKindMismatch,
              "fragment extent kind '" + std::string(to_string(k)) + "' not accepted");
      return;
    }
  }
}

}  // namespace detail

/// Definition-1 check: accepts iff binding count, names and order match the
/// spec and every value lies in its domain. All violations are reported.
inline ValidationVerdict validate_anchor(const Anchor& anchor, const IndexerSpec& spec,
                                         const TargetFacts& facts) {
  ValidationVerdict verdict;
  if (anchor.indexer != spec.name)
    verdict.violations.push_back(
        Violation{ErrorCode::UnknownIndexer,
                  "", "anchor names '" + anchor.indexer + "', spec is '" + spec.name + "'"});
  if (spec.applies_to && *spec.applies_to != facts.induced)
    verdict.violations.push_back(Violation{
        ErrorCode::MediaTypeMismatch, "",
        "indexer applies to " + std::string(mime_name(*spec.applies_to)) + ", target is " +
            std::string(mime_name(facts.induced))});

  const std::size_t n_params = spec.parameters.size();
  const std::size_t n_bound = anchor.bindings.size();
  for (std::size_t j = 0; j < std::max(n_params, n_bound); ++j) {
    if (j >= n_bound) {
      verdict.violations.push_back(Violation{ErrorCode::MissingParameter,
                                             spec.parameters[j].name, "binding is required"});
      continue;
    }
    if (j >= n_params) {
      verdict.violations.push_back(Violation{ErrorCode::UnknownParameter,
                                             anchor.bindings[j].name,
                                             "indexer takes no such parameter"});
      continue;
    }
    const IndexerParam& param = spec.parameters[j];
    const AnchorBinding& binding = anchor.bindings[j];
    if (binding.name != param.name) {
      verdict.violations.push_back(
          Violation{ErrorCode::UnknownParameter, binding.name,
                    "expected parameter '" + param.name + "' at position " + std::to_string(j)});
      continue;
    }
    detail::check_domain(binding.value, param.domain, param.name, facts, verdict.violations);
  }
  return verdict;
}

/// Target of an application: the artifact plus the fragment being indexed
/// (the whole artifact when no narrowing has happened yet).
struct ResolveTarget {
  const InformationArtifact& artifact;
  Fragment fragment;
};

inline ResolveTarget whole_target(const InformationArtifact& a) {
  return ResolveTarget{a, whole_fragment(a)};
}

/// Definition 2: the universal per-bit indexer. Bit i of the target's own
/// stream, wherever that falls in the source artifact.
inline Fragment binary_indexer(const ResolveTarget& target, std::uint64_t i) {
  const std::uint64_t total = target.fragment.bits.total_bits();
  if (i >= total)
    throw GfmError(ErrorCode::DomainViolation,
                   "bit index " + std::to_string(i) + " out of [0," + std::to_string(total) + ")");
  Fragment f;
  f.source = target.artifact.id;
  f.bits = target.fragment.bits.slice(i, i + 1);
  const BitSpan span = f.bits.spans().front();
  f.extent = BitRangeExtent{span.begin, span.end};
  f.context = RawView{};
  return f;
}

/// id(s) = s. The fragment must belong to the given artifact.
inline Fragment identity_indexer(const InformationArtifact& artifact, const Fragment& s) {
  if (s.source != artifact.id)
    throw GfmError(ErrorCode::ForeignFragment,
                   "fragment of '" + s.source + "' applied to '" + artifact.id + "'");
  return s;
}

class IndexerRegistry {
 public:
  using ResolveFn = std::function<Fragment(const ResolveTarget&, const Anchor&)>;

  struct Entry {
    IndexerSpec spec;
    ResolveFn fn;
  };

  /// Every registry implicitly provides `binary` and `id` for all media.
  IndexerRegistry() {
    IndexerSpec binary;
    binary.name = "binary";
    binary.parameters = {{"i", DomainSpec::int_range(0, Bound::BitLength)}};
    binary.output_kind = ExtentKind::Bit;
    binary.taxonomy = IndexerClass::Binary;
    entries_.push_back(Entry{std::move(binary), [](const ResolveTarget& t, const Anchor& a) {
      return binary_indexer(t, static_cast<std::uint64_t>(
                                   std::get<std::int64_t>(a.bindings.at(0).value)));
    }});

    IndexerSpec id;
    id.name = "id";
    id.output_kind = ExtentKind::Fragment;
    id.taxonomy = IndexerClass::Identity;
    entries_.push_back(Entry{std::move(id), [](const ResolveTarget& t, const Anchor&) {
      return t.fragment;
    }});
  }

  void add(IndexerSpec spec, ResolveFn fn = nullptr) {
    for (std::size_t i = 0; i < spec.parameters.size(); ++i)
      for (std::size_t j = i + 1; j < spec.parameters.size(); ++j)
        if (spec.parameters[i].name == spec.parameters[j].name)
          throw std::invalid_argument("duplicate parameter name '" + spec.parameters[i].name +
                                      "' in indexer '" + spec.name + "'");
    for (const Entry& e : entries_)
      if (e.spec.name == spec.name && e.spec.applies_to == spec.applies_to)
        throw GfmError(ErrorCode::DuplicateIndexer,
                       "'" + spec.name + "' already registered for this media-type class");
    entries_.push_back(Entry{std::move(spec), std::move(fn)});
  }

  /// Exact media-type entry wins over an `any` entry; nullptr when the name
  /// is unknown for this media type.
  const Entry* find(std::string_view name, MediaType media) const {
    const Entry* any_match = nullptr;
    for (const Entry& e : entries_) {
      if (e.spec.name != name) continue;
      if (!e.spec.applies_to) any_match = &e;
      else if (*e.spec.applies_to == media) return &e;
    }
    return any_match;
  }

  bool has_name(std::string_view name) const {
    for (const Entry& e : entries_)
      if (e.spec.name == name) return true;
    return false;
  }

  std::vector<const Entry*> for_media(MediaType media) const {
    std::vector<const Entry*> out;
    for (const Entry& e : entries_)
      if (!e.spec.applies_to || *e.spec.applies_to == media) out.push_back(&e);
    return out;
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::vector<Entry> entries_;
};

/// Validates per Definition 1, then runs the indexer. Empty-parameter
/// indexers without a bound resolver return the whole target.
inline Fragment apply(const IndexerRegistry::Entry& entry, const ResolveTarget& target,
                      const Anchor& anchor, const TargetFacts& facts) {
  ValidationVerdict verdict = validate_anchor(anchor, entry.spec, facts);
  if (!verdict.ok()) throw ValidationError(std::move(verdict));
  if (entry.fn) return entry.fn(target, anchor);
  if (entry.spec.parameters.empty()) return target.fragment;
  throw GfmError(ErrorCode::ResolverFailure,
                 "indexer '" + entry.spec.name + "' has no bound resolver");
}

}  // namespace gfm
