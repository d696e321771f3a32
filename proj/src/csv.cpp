#include "sdgf/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sdgf/gabor.hpp"

namespace sdgf {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::UnsupportedFormat, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
    fields.back().pop_back();
  }
  return fields;
}

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOFailure, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IOFailure, "write to '" + path + "' failed");
}

}  // namespace

void write_vector_csv(const std::string& path, const Vector& x) {
  auto out = open_for_write(path);
  out << "value\n";
  for (Index i = 0; i < x.size(); ++i) out << format_double(x(i)) << '\n';
  finish(out, path);
}

void write_vector_csv(const std::string& path, const CVector& x) {
  auto out = open_for_write(path);
  out << "real,imag\n";
  for (Index i = 0; i < x.size(); ++i) {
    out << format_double(x(i).real()) << ',' << format_double(x(i).imag()) << '\n';
  }
  finish(out, path);
}

CVector read_vector_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open '" + path + "'");
  std::vector<Complex> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    try {
      if (fields.size() == 1) {
        values.emplace_back(parse_double(fields[0]), 0.0);
      } else if (fields.size() == 2) {
        values.emplace_back(parse_double(fields[0]), parse_double(fields[1]));
      } else {
        throw Error(ErrorCode::UnsupportedFormat,
                    "expected 1 or 2 columns in '" + path + "', got " +
                        std::to_string(fields.size()));
      }
    } catch (const Error& e) {
      if (!first || e.code() != ErrorCode::UnsupportedFormat || fields.size() > 2) throw;
    }
    first = false;
  }
  CVector x(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) x(static_cast<Index>(i)) = values[i];
  return x;
}

void write_coefficients_csv(const std::string& path, const GaborCoefficients& c) {
  auto out = open_for_write(path);
  out << "m,n,real,imag\n";
  for (Index n = 0; n < c.values.cols(); ++n) {
    for (Index m = 0; m < c.values.rows(); ++m) {
      out << m << ',' << n << ',' << format_double(c.values(m, n).real()) << ','
          << format_double(c.values(m, n).imag()) << '\n';
    }
  }
  finish(out, path);
}

}  // namespace sdgf
