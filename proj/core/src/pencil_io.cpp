#include "defeig/pencil_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "defeig/error.hpp"

namespace defeig {

namespace {

constexpr const char* kMagic = "defeig-pencil";
constexpr int kVersion = 1;

std::string format_double(double v, NumberFormat fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt == NumberFormat::kHex ? "%a" : "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') fail(ErrorKind::kInvalidInput, "pencil file: bad number '" + tok + "'");
  return v;
}

void write_matrix(std::ostream& os, const char* name, const Matrix& m, NumberFormat fmt) {
  os << name << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(m(i, j).real(), fmt) << ' ' << format_double(m(i, j).imag(), fmt);
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is, const char* name, Index n) {
  std::string tag;
  if (!(is >> tag) || tag != name) {
    fail(ErrorKind::kInvalidInput, std::string("pencil file: expected block ") + name);
  }
  Matrix m(n, n);
  std::string re;
  std::string im;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!(is >> re >> im)) fail(ErrorKind::kInvalidInput, "pencil file: truncated matrix data");
      m(i, j) = Complex(parse_double(re), parse_double(im));
    }
  }
  return m;
}

}  // namespace

void write_pencil(std::ostream& os, const PencilFile& file, NumberFormat fmt) {
  const Index n = file.pencil.n();
  os << kMagic << ' ' << kVersion << '\n';
  os << "n " << n << '\n';
  os << "format " << (fmt == NumberFormat::kHex ? "hex" : "decimal") << '\n';
  if (!file.metadata_json.empty()) {
    require(file.metadata_json.find('\n') == std::string::npos, ErrorKind::kInvalidInput,
            "pencil metadata must be a single line");
    os << "meta " << file.metadata_json << '\n';
  }
  write_matrix(os, "A", file.pencil.a(), fmt);
  write_matrix(os, "B", file.pencil.b(), fmt);
}

PencilFile read_pencil(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != kMagic) {
    fail(ErrorKind::kInvalidInput, "pencil file: missing header");
  }
  require(version == kVersion, ErrorKind::kInvalidInput, "pencil file: unsupported version");
  std::string key;
  long long n = 0;
  if (!(is >> key >> n) || key != "n" || n < 1) {
    fail(ErrorKind::kInvalidInput, "pencil file: bad dimension line");
  }
  std::string fmt;
  if (!(is >> key >> fmt) || key != "format") fail(ErrorKind::kInvalidInput, "pencil file: bad format line");

  std::string meta;
  is >> std::ws;
  if (is.peek() == 'm') {
    std::string line;
    std::getline(is, line);
    require(line.rfind("meta ", 0) == 0, ErrorKind::kInvalidInput, "pencil file: bad metadata line");
    meta = line.substr(5);
  }
  Matrix a = read_matrix(is, "A", static_cast<Index>(n));
  Matrix b = read_matrix(is, "B", static_cast<Index>(n));
  try {
    return {HermitianPencil(std::move(a), std::move(b)), std::move(meta)};
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvalidInput, std::string("pencil file: ") + e.what());
  }
}

std::string pencil_to_string(const PencilFile& file, NumberFormat fmt) {
  std::ostringstream os;
  write_pencil(os, file, fmt);
  return os.str();
}

PencilFile pencil_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_pencil(is);
}

PencilFile load_pencil(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::kIo, "cannot open " + path);
  return read_pencil(is);
}

void save_pencil(const std::string& path, const PencilFile& file, NumberFormat fmt) {
  write_file_atomic(path, pencil_to_string(file, fmt));
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorKind::kIo, "cannot write " + tmp.string());
    os << contents;
    os.flush();
    if (!os) fail(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::kIo, "cannot rename onto " + path);
  }
}

}  // namespace defeig
