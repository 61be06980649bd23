#include "palcanon/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "palcanon/error.hpp"

namespace palcanon {

namespace {

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  bool next(std::string_view& token) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == text_.size()) return false;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    token = text_.substr(start, pos_ - start);
    return true;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::size_t parse_dimension(std::string_view token) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value == 0) {
    throw ValidationError("matrix file: malformed header token '" + std::string(token) + "'");
  }
  return value;
}

double parse_value(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("matrix file: malformed value '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ValidationError("matrix file: non-finite value '" + std::string(token) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CMatrix parse_matrix(std::string_view text) {
  Tokenizer tok(text);
  std::string_view t;
  if (!tok.next(t)) throw ValidationError("matrix file: missing header");
  const std::size_t rows = parse_dimension(t);
  if (!tok.next(t)) throw ValidationError("matrix file: header needs two integers");
  const std::size_t cols = parse_dimension(t);

  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  std::size_t tokens = 0;
  std::vector<double> pending;
  while (tok.next(t)) {
    ++tokens;
    if (tokens > 2 * rows * cols) {
      throw ValidationError("matrix file: more than " + std::to_string(2 * rows * cols) +
                            " value tokens");
    }
    pending.push_back(parse_value(t));
    if (pending.size() == 2) {
      entries.emplace_back(pending[0], pending[1]);
      pending.clear();
    }
  }
  if (tokens != 2 * rows * cols) {
    throw ValidationError("matrix file: expected " + std::to_string(2 * rows * cols) +
                          " value tokens, found " + std::to_string(tokens));
  }
  return CMatrix(rows, cols, std::move(entries));
}

void write_matrix(const CMatrix& a, std::ostream& out) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j > 0) out << "  ";
      out << format_double(a(i, j).real()) << ' ' << format_double(a(i, j).imag());
    }
    out << '\n';
  }
}

CMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open matrix file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

void write_matrix(const CMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write matrix file " + path.string());
  write_matrix(a, out);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace palcanon
