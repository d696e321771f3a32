#ifndef SDGF_CSV_HPP
#define SDGF_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

#include "sdgf/types.hpp"

namespace sdgf {

struct GaborCoefficients;

// Shortest text that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

// One column for real vectors; two columns (real, imag) for complex ones.
void write_vector_csv(const std::string& path, const Vector& x);
void write_vector_csv(const std::string& path, const CVector& x);
// Reads one or two numeric columns; a non-numeric first line is a header.
CVector read_vector_csv(const std::string& path);

// Columns m,n,real,imag in n-major order.
void write_coefficients_csv(const std::string& path, const GaborCoefficients& c);

}  // namespace sdgf

#endif  // SDGF_CSV_HPP
