#pragma once

#include <iosfwd>
#include <string>

#include "defeig/pencil.hpp"

namespace defeig {

enum class NumberFormat { kHex, kDecimal };

/// Text pencil file: header, optional one-line JSON metadata, then A and B
/// row by row as "re im" pairs. Hex floats round-trip bit-exactly.
struct PencilFile {
  HermitianPencil pencil;
  std::string metadata_json;  ///< empty when absent
};

void write_pencil(std::ostream& os, const PencilFile& file, NumberFormat fmt = NumberFormat::kHex);
PencilFile read_pencil(std::istream& is);

std::string pencil_to_string(const PencilFile& file, NumberFormat fmt = NumberFormat::kHex);
PencilFile pencil_from_string(const std::string& text);

PencilFile load_pencil(const std::string& path);
void save_pencil(const std::string& path, const PencilFile& file,
                 NumberFormat fmt = NumberFormat::kHex);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace defeig
