#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "gfm/error.hpp"

namespace gfm {

/// Half-open bit interval [begin, end), measured from the artifact origin.
struct BitSpan {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  std::uint64_t length() const noexcept { return end - begin; }
  auto operator<=>(const BitSpan&) const = default;
};

/// A normalized set of bit spans: sorted ascending, pairwise disjoint,
/// non-adjacent (adjacent spans are merged), every span non-empty.
class BitSpanSet {
 public:
  BitSpanSet() = default;

  static BitSpanSet of(std::vector<BitSpan> spans) {
    std::erase_if(spans, [](const BitSpan& s) { return s.begin >= s.end; });
    std::sort(spans.begin(), spans.end());
    std::vector<BitSpan> merged;
    for (const BitSpan& s : spans) {
      if (!merged.empty() && s.begin <= merged.back().end) {
        merged.back().end = std::max(merged.back().end, s.end);
      } else {
        merged.push_back(s);
      }
    }
    BitSpanSet out;
    out.spans_ = std::move(merged);
    return out;
  }

  static BitSpanSet single(std::uint64_t begin, std::uint64_t end) {
    return of({BitSpan{begin, end}});
  }

  const std::vector<BitSpan>& spans() const noexcept { return spans_; }
  bool empty() const noexcept { return spans_.empty(); }

  std::uint64_t total_bits() const noexcept {
    std::uint64_t n = 0;
    for (const BitSpan& s : spans_) n += s.length();
    return n;
  }

  bool within(std::uint64_t bit_length) const noexcept {
    return spans_.empty() || spans_.back().end <= bit_length;
  }

  /// True when every bit of `other` is also a bit of this set.
  bool contains(const BitSpanSet& other) const noexcept {
    std::size_t i = 0;
    for (const BitSpan& o : other.spans_) {
      while (i < spans_.size() && spans_[i].end <= o.begin) ++i;
      if (i == spans_.size() || spans_[i].begin > o.begin || spans_[i].end < o.end)
        return false;
    }
    return true;
  }

  /// Maps a relative bit window [rel_begin, rel_end) onto this set: bit k of
  /// the set's concatenated stream becomes an absolute position. The window
  /// is clipped to the stream length.
  BitSpanSet slice(std::uint64_t rel_begin, std::uint64_t rel_end) const {
    std::vector<BitSpan> out;
    std::uint64_t pos = 0;
    for (const BitSpan& s : spans_) {
      const std::uint64_t len = s.length();
      const std::uint64_t lo = std::max(rel_begin, pos);
      const std::uint64_t hi = std::min(rel_end, pos + len);
      if (lo < hi) out.push_back(BitSpan{s.begin + (lo - pos), s.begin + (hi - pos)});
      pos += len;
      if (pos >= rel_end) break;
    }
    return of(std::move(out));
  }

  friend bool operator==(const BitSpanSet&, const BitSpanSet&) = default;

 private:
  std::vector<BitSpan> spans_;
};

}  // namespace gfm
