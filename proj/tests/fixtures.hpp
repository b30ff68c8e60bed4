#pragma once

// Shared fixture artifacts: tiny PPM images, a 3-row CSV, short UTF-8 texts
// and a 30 s synthetic WAV. Several tests assert hand-counted byte offsets
// into these exact bytes, so any change here must re-derive those numbers.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "gfm/artifact.hpp"
#include "gfm/fragment.hpp"

namespace fixtures {

inline std::vector<std::uint8_t> bytes_of(const std::string& s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

inline gfm::InformationArtifact make_artifact(std::string id, gfm::MediaType type,
                                              std::vector<std::uint8_t> content) {
  gfm::InformationArtifact a;
  a.id = std::move(id);
  a.media_type = type;
  a.content = std::move(content);
  return a;
}

// --- images ---

// 2x2 P6: header is 11 bytes ("P6\n2 2\n255\n"), raster 12 bytes, total 23.
// (0,0)=black (1,0)=red (0,1)=red (1,1)=blue; red at (1,0) and (0,1).
inline std::vector<std::uint8_t> ppm2x2_bytes() {
  std::vector<std::uint8_t> out = bytes_of("P6\n2 2\n255\n");
  const std::uint8_t raster[12] = {0, 0, 0, 255, 0, 0, 255, 0, 0, 0, 0, 255};
  out.insert(out.end(), raster, raster + 12);
  return out;
}

inline gfm::InformationArtifact ppm2x2(std::string id = "img2x2.ppm") {
  return make_artifact(std::move(id), gfm::MediaType::Ppm, ppm2x2_bytes());
}

// Same image as P3 ASCII.
inline gfm::InformationArtifact ppm2x2_p3(std::string id = "img2x2_p3.ppm") {
  return make_artifact(std::move(id), gfm::MediaType::Ppm,
                       bytes_of("P3\n2 2\n255\n0 0 0 255 0 0\n255 0 0 0 0 255\n"));
}

// 8x8 P6 with a deterministic raster.
inline std::vector<std::uint8_t> ppm8x8_bytes() {
  std::vector<std::uint8_t> out = bytes_of("P6\n8 8\n255\n");
  for (std::uint32_t y = 0; y < 8; ++y)
    for (std::uint32_t x = 0; x < 8; ++x)
      for (std::uint32_t c = 0; c < 3; ++c)
        out.push_back(static_cast<std::uint8_t>((x * 31 + y * 17 + c * 7) % 256));
  return out;
}

inline gfm::InformationArtifact ppm8x8(std::string id = "img8x8.ppm") {
  return make_artifact(std::move(id), gfm::MediaType::Ppm, ppm8x8_bytes());
}

// Random small image with at least one pixel of a chosen color.
inline std::vector<std::uint8_t> random_ppm_bytes(std::mt19937& rng, std::uint32_t w,
                                                  std::uint32_t h, gfm::RgbColor planted,
                                                  int plant_count) {
  std::vector<std::uint8_t> out =
      bytes_of("P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n");
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> raster(static_cast<std::size_t>(w) * h * 3);
  for (auto& b : raster) b = static_cast<std::uint8_t>(byte(rng));
  std::uniform_int_distribution<std::uint32_t> px(0, w - 1), py(0, h - 1);
  for (int i = 0; i < plant_count; ++i) {
    const std::uint32_t x = px(rng), y = py(rng);
    const std::size_t at = (static_cast<std::size_t>(y) * w + x) * 3;
    raster[at] = planted.r;
    raster[at + 1] = planted.g;
    raster[at + 2] = planted.b;
  }
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

// --- tables ---

// Byte map (LF terminators):
//   header "well,depth" [0,10)
//   row 0 "W1,100" [11,17): cells [11,13) [14,17)
//   row 1 "W2,250" [18,24): cells [18,20) [21,24)
//   row 2 "W3,75"  [25,30): cells [25,27) [28,30)
inline gfm::InformationArtifact csv3(std::string id = "wells.csv") {
  return make_artifact(std::move(id), gfm::MediaType::Csv,
                       bytes_of("well,depth\nW1,100\nW2,250\nW3,75\n"));
}

inline gfm::InformationArtifact csv3_crlf(std::string id = "wells_crlf.csv") {
  return make_artifact(std::move(id), gfm::MediaType::Csv,
                       bytes_of("well,depth\r\nW1,100\r\nW2,250\r\nW3,75\r\n"));
}

// Quoted cells: row 0 notes = `x,"y"` written as "x,""y""".
inline gfm::InformationArtifact csv_quoted(std::string id = "quoted.csv") {
  return make_artifact(std::move(id), gfm::MediaType::Csv,
                       bytes_of("name,notes\na,\"x,\"\"y\"\"\"\nb,plain\n"));
}

// --- texts ---

// 7 bytes, 6 chars; paragraph 1 is "bé" at chars [4,6) = bytes [4,7).
inline gfm::InformationArtifact text_tiny(std::string id = "tiny.txt") {
  return make_artifact(std::move(id), gfm::MediaType::Text, bytes_of("aa\n\nb\xC3\xA9"));
}

// Three paragraphs, 6 lines (2 blank), 69 chars / 70 bytes ("ï" is 2 bytes).
inline gfm::InformationArtifact text3(std::string id = "notes.txt") {
  return make_artifact(std::move(id), gfm::MediaType::Text,
                       bytes_of("Alpha beta.\nGamma delta.\n\nSecond block here.\n\n"
                                "Third: na\xC3\xAFve and last.\n"));
}

// --- audio ---

// 30 s, 8000 Hz, mono, 16-bit PCM: 44-byte header + 480000 data bytes.
inline std::vector<std::uint8_t> wav30s_bytes() {
  const std::uint32_t rate = 8000;
  const std::uint32_t seconds = 30;
  const std::uint32_t n = rate * seconds * 2;
  std::vector<std::uint8_t> out;
  out.reserve(44 + n);
  auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  auto u32 = [&](std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  };
  auto u16 = [&](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  tag("RIFF");
  u32(36 + n);
  tag("WAVE");
  tag("fmt ");
  u32(16);
  u16(1);
  u16(1);
  u32(rate);
  u32(rate * 2);
  u16(2);
  u16(16);
  tag("data");
  u32(n);
  std::uint32_t state = 0x12345678;
  for (std::uint32_t i = 0; i < n; ++i) {
    state = state * 1664525u + 1013904223u;
    out.push_back(static_cast<std::uint8_t>(state >> 24));
  }
  return out;
}

inline gfm::InformationArtifact wav30s(std::string id = "clip.wav") {
  static const std::vector<std::uint8_t> bytes = wav30s_bytes();
  return make_artifact(std::move(id), gfm::MediaType::Wav, bytes);
}

// --- filesystem helpers ---

class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("gfm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

  std::filesystem::path write(const std::string& name, const std::vector<std::uint8_t>& bytes) const {
    const std::filesystem::path p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace fixtures
