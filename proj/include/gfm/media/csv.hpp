#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfm/error.hpp"

namespace gfm {

/// One CSV field. `begin/end` is the content byte span: for quoted fields the
/// raw bytes strictly between the outer quotes, otherwise the field bytes.
/// `value` is the unescaped cell text used for comparisons.
struct CsvCell {
  std::uint64_t begin = 0, end = 0;
  std::string value;
};

/// One record: byte span includes field separators, excludes the terminator.
struct CsvRecord {
  std::uint64_t begin = 0, end = 0;
  std::vector<CsvCell> cells;
};

struct CsvInfo {
  CsvRecord header;
  std::vector<std::string> columns;  // header cell values
  std::vector<CsvRecord> rows;       // data records

  std::optional<std::uint32_t> column_index(const std::string& name) const {
    for (std::uint32_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name) return c;
    return std::nullopt;
  }
};

/// RFC 4180 subset: comma delimiter, CRLF or LF record terminators,
/// double-quote quoting with "" escapes, first record is the header.
/// Ragged rows are rejected.
inline CsvInfo parse_csv(const std::vector<std::uint8_t>& bytes) {
  auto fail = [](const char* why) -> CsvInfo {
    throw GfmError(ErrorCode::ResolverFailure, std::string("malformed CSV: ") + why);
  };
  const std::uint64_t n = bytes.size();
  if (n == 0) return fail("empty input has no header record");

  std::vector<CsvRecord> records;
  std::uint64_t i = 0;
  while (i < n) {
    CsvRecord rec;
    rec.begin = i;
    bool record_done = false;
    while (!record_done) {
      CsvCell cell;
      if (i < n && bytes[i] == '"') {
        ++i;
        cell.begin = i;
        std::string value;
        while (true) {
          if (i >= n) return fail("unterminated quoted field");
          if (bytes[i] == '"') {
            if (i + 1 < n && bytes[i + 1] == '"') {
              value.push_back('"');
              i += 2;
            } else {
              cell.end = i;
              ++i;
              break;
            }
          } else {
            value.push_back(static_cast<char>(bytes[i]));
            ++i;
          }
        }
        cell.value = std::move(value);
        if (i < n && bytes[i] != ',' && bytes[i] != '\n' &&
            !(bytes[i] == '\r' && i + 1 < n && bytes[i + 1] == '\n'))
          return fail("garbage after closing quote");
      } else {
        cell.begin = i;
        while (i < n && bytes[i] != ',' && bytes[i] != '\n' &&
               !(bytes[i] == '\r' && i + 1 < n && bytes[i + 1] == '\n'))
          ++i;
        cell.end = i;
        cell.value.assign(bytes.begin() + static_cast<std::ptrdiff_t>(cell.begin),
                          bytes.begin() + static_cast<std::ptrdiff_t>(cell.end));
      }
      rec.cells.push_back(std::move(cell));

      if (i >= n) {
        rec.end = i;
        record_done = true;
      } else if (bytes[i] == ',') {
        ++i;
      } else if (bytes[i] == '\n') {
        rec.end = i;
        ++i;
        record_done = true;
      } else {  // "\r\n"
        rec.end = i;
        i += 2;
        record_done = true;
      }
    }
    records.push_back(std::move(rec));
  }

  CsvInfo info;
  info.header = std::move(records.front());
  for (const CsvCell& c : info.header.cells) info.columns.push_back(c.value);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].cells.size() != info.columns.size()) return fail("ragged row");
    info.rows.push_back(std::move(records[r]));
  }
  return info;
}

}  // namespace gfm
