#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gfm/error.hpp"

namespace gfm {

/// PCM WAV layout: single `fmt ` chunk (format code 1, 8/16-bit) plus one
/// `data` chunk. Unknown chunks are skipped.
struct WavInfo {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint64_t data_offset = 0;  // bytes, start of data payload
  std::uint64_t data_size = 0;    // bytes

  std::uint32_t block_align() const noexcept {
    return channels * (bits_per_sample / 8u);
  }
  std::uint64_t frame_count() const noexcept { return data_size / block_align(); }
  double duration() const noexcept {
    return static_cast<double>(frame_count()) / sample_rate;
  }
};

namespace detail {

inline std::uint32_t rd_u32le(const std::vector<std::uint8_t>& b, std::uint64_t i) {
  return static_cast<std::uint32_t>(b[i]) | (static_cast<std::uint32_t>(b[i + 1]) << 8) |
         (static_cast<std::uint32_t>(b[i + 2]) << 16) |
         (static_cast<std::uint32_t>(b[i + 3]) << 24);
}

inline std::uint16_t rd_u16le(const std::vector<std::uint8_t>& b, std::uint64_t i) {
  return static_cast<std::uint16_t>(b[i] | (b[i + 1] << 8));
}

inline void wr_u32le(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 24));
}

inline void wr_u16le(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline bool chunk_id_is(const std::vector<std::uint8_t>& b, std::uint64_t i, const char* id) {
  return b[i] == static_cast<std::uint8_t>(id[0]) && b[i + 1] == static_cast<std::uint8_t>(id[1]) &&
         b[i + 2] == static_cast<std::uint8_t>(id[2]) && b[i + 3] == static_cast<std::uint8_t>(id[3]);
}

}  // namespace detail

inline WavInfo parse_wav(const std::vector<std::uint8_t>& bytes) {
  auto fail = [](const char* why) -> WavInfo {
    throw GfmError(ErrorCode::ResolverFailure, std::string("malformed WAV: ") + why);
  };
  if (bytes.size() < 12 || !detail::chunk_id_is(bytes, 0, "RIFF") ||
      !detail::chunk_id_is(bytes, 8, "WAVE"))
    return fail("missing RIFF/WAVE header");

  WavInfo info;
  bool have_fmt = false, have_data = false;
  std::uint64_t i = 12;
  while (i + 8 <= bytes.size()) {
    const std::uint64_t size = detail::rd_u32le(bytes, i + 4);
    const std::uint64_t body = i + 8;
    if (body + size > bytes.size()) return fail("truncated chunk");
    if (detail::chunk_id_is(bytes, i, "fmt ")) {
      if (have_fmt) return fail("duplicate fmt chunk");
      if (size < 16) return fail("fmt chunk too small");
      const std::uint16_t format = detail::rd_u16le(bytes, body);
      if (format != 1) return fail("not PCM (format code must be 1)");
      info.channels = detail::rd_u16le(bytes, body + 2);
      info.sample_rate = detail::rd_u32le(bytes, body + 4);
      info.bits_per_sample = detail::rd_u16le(bytes, body + 14);
      if (info.channels == 0) return fail("zero channels");
      if (info.sample_rate == 0) return fail("zero sample rate");
      if (info.bits_per_sample != 8 && info.bits_per_sample != 16)
        return fail("bits per sample must be 8 or 16");
      have_fmt = true;
    } else if (detail::chunk_id_is(bytes, i, "data")) {
      if (have_data) return fail("duplicate data chunk");
      info.data_offset = body;
      info.data_size = size;
      have_data = true;
    }
    i = body + size + (size & 1);  // chunks are word-aligned
  }
  if (!have_fmt) return fail("missing fmt chunk");
  if (!have_data) return fail("missing data chunk");
  if (info.data_size % info.block_align() != 0) return fail("data size not frame-aligned");
  return info;
}

/// Absolute byte range of the frames covered by [start, finish) seconds.
/// Frame indices are floor(seconds * rate), clamped to the frame count.
inline std::pair<std::uint64_t, std::uint64_t> time_interval_bytes(const WavInfo& info,
                                                                   double start, double finish) {
  auto frame_of = [&](double seconds) {
    double f = std::floor(seconds * info.sample_rate);
    if (f < 0) f = 0;
    const double max_f = static_cast<double>(info.frame_count());
    if (f > max_f) f = max_f;
    return static_cast<std::uint64_t>(f);
  };
  const std::uint64_t f0 = frame_of(start);
  const std::uint64_t f1 = frame_of(finish);
  const std::uint64_t block = info.block_align();
  return {info.data_offset + f0 * block, info.data_offset + f1 * block};
}

/// Canonical 44-byte RIFF/WAVE/fmt/data header around `payload`.
inline std::vector<std::uint8_t> synthesize_wav(const WavInfo& info,
                                                const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> out;
  out.reserve(44 + payload.size());
  auto push_tag = [&](const char* tag) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(tag[k]));
  };
  const std::uint32_t n = static_cast<std::uint32_t>(payload.size());
  push_tag("RIFF");
  detail::wr_u32le(out, 36 + n);
  push_tag("WAVE");
  push_tag("fmt ");
  detail::wr_u32le(out, 16);
  detail::wr_u16le(out, 1);  // PCM
  detail::wr_u16le(out, info.channels);
  detail::wr_u32le(out, info.sample_rate);
  detail::wr_u32le(out, info.sample_rate * info.block_align());
  detail::wr_u16le(out, static_cast<std::uint16_t>(info.block_align()));
  detail::wr_u16le(out, info.bits_per_sample);
  push_tag("data");
  detail::wr_u32le(out, n);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

}  // namespace gfm
