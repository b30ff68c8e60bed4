#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfm/error.hpp"

namespace gfm {

struct CharRange {
  std::uint64_t begin = 0, end = 0;  // char indices, half-open
  friend bool operator==(const CharRange&, const CharRange&) = default;
};

/// Char-level index of a UTF-8 text: byte offset and scalar value per char.
struct TextIndex {
  std::vector<std::uint64_t> offsets;  // offsets[k] = byte offset of char k; size = count+1
  std::vector<char32_t> scalars;

  std::uint64_t char_count() const noexcept { return scalars.size(); }

  std::uint64_t byte_of(std::uint64_t char_index) const { return offsets[char_index]; }

  // [b0, b1) byte range of chars [c0, c1)
  std::pair<std::uint64_t, std::uint64_t> byte_range(std::uint64_t c0, std::uint64_t c1) const {
    return {offsets[c0], offsets[c1]};
  }
};

/// Strict UTF-8 decode; rejects overlongs, surrogates and truncated tails.
inline TextIndex index_text(const std::vector<std::uint8_t>& bytes) {
  TextIndex ix;
  std::uint64_t i = 0;
  const std::uint64_t n = bytes.size();
  auto cont = [&](std::uint64_t k) { return k < n && (bytes[k] & 0xC0) == 0x80; };
  while (i < n) {
    const std::uint8_t b0 = bytes[i];
    char32_t cp = 0;
    std::uint64_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if (b0 >= 0xC2 && b0 <= 0xDF) {
      if (!cont(i + 1)) throw GfmError(ErrorCode::ResolverFailure, "invalid UTF-8 sequence");
      cp = ((b0 & 0x1Fu) << 6) | (bytes[i + 1] & 0x3Fu);
      len = 2;
    } else if (b0 >= 0xE0 && b0 <= 0xEF) {
      if (!cont(i + 1) || !cont(i + 2))
        throw GfmError(ErrorCode::ResolverFailure, "invalid UTF-8 sequence");
      const std::uint8_t b1 = bytes[i + 1];
      if ((b0 == 0xE0 && b1 < 0xA0) || (b0 == 0xED && b1 > 0x9F))
        throw GfmError(ErrorCode::ResolverFailure, "invalid UTF-8 sequence");
      cp = ((b0 & 0x0Fu) << 12) | ((b1 & 0x3Fu) << 6) | (bytes[i + 2] & 0x3Fu);
      len = 3;
    } else if (b0 >= 0xF0 && b0 <= 0xF4) {
      if (!cont(i + 1) || !cont(i + 2) || !cont(i + 3))
        throw GfmError(ErrorCode::ResolverFailure, "invalid UTF-8 sequence");
      const std::uint8_t b1 = bytes[i + 1];
      if ((b0 == 0xF0 && b1 < 0x90) || (b0 == 0xF4 && b1 > 0x8F))
        throw GfmError(ErrorCode::ResolverFailure, "invalid UTF-8 sequence");
      cp = ((b0 & 0x07u) << 18) | ((b1 & 0x3Fu) << 12) | ((bytes[i + 2] & 0x3Fu) << 6) |
           (bytes[i + 3] & 0x3Fu);
      len = 4;
    } else {
      throw GfmError(ErrorCode::ResolverFailure, "invalid UTF-8 lead byte");
    }
    ix.offsets.push_back(i);
    ix.scalars.push_back(cp);
    i += len;
  }
  ix.offsets.push_back(n);
  return ix;
}

/// Lines within chars [c0, c1): content excludes the '\n' terminator and a
/// '\r' immediately before it. A final unterminated segment counts as a line.
inline std::vector<CharRange> lines_in(const TextIndex& ix, std::uint64_t c0, std::uint64_t c1) {
  std::vector<CharRange> lines;
  std::uint64_t start = c0;
  for (std::uint64_t c = c0; c < c1; ++c) {
    if (ix.scalars[c] == U'\n') {
      std::uint64_t end = c;
      if (end > start && ix.scalars[end - 1] == U'\r') --end;
      lines.push_back(CharRange{start, end});
      start = c + 1;
    }
  }
  if (start < c1) {
    std::uint64_t end = c1;
    if (end > start && ix.scalars[end - 1] == U'\r') --end;
    lines.push_back(CharRange{start, end});
  }
  return lines;
}

/// Paragraphs within chars [c0, c1): maximal runs of non-blank lines
/// separated by one or more blank (empty) lines. The paragraph span runs from
/// the first line's begin to the last line's end, so interior newlines stay
/// inside the paragraph.
inline std::vector<CharRange> paragraphs_in(const TextIndex& ix, std::uint64_t c0,
                                            std::uint64_t c1) {
  std::vector<CharRange> paras;
  std::optional<CharRange> open;
  for (const CharRange& line : lines_in(ix, c0, c1)) {
    const bool blank = line.begin == line.end;
    if (blank) {
      if (open) {
        paras.push_back(*open);
        open.reset();
      }
    } else if (open) {
      open->end = line.end;
    } else {
      open = line;
    }
  }
  if (open) paras.push_back(*open);
  return paras;
}

}  // namespace gfm
