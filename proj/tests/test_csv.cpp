#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sdgf/csv.hpp"
#include "sdgf/gabor.hpp"

using namespace sdgf;

TEST_CASE("doubles round trip through text") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double v = i % 2 ? u(rng) : std::ldexp(u(rng), -600 + i % 1200);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(parse_double(format_double(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
  CHECK_THROWS_AS(parse_double("1.5x"), Error);
  CHECK_THROWS_AS(parse_double(""), Error);
}

TEST_CASE("line splitting") {
  CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(split_csv_line("1.5\r") == std::vector<std::string>{"1.5"});
}

TEST_CASE("vector files round trip") {
  std::mt19937_64 rng(1);
  const CVector z = oracle::random_cvector(17, rng);
  write_vector_csv("csv_complex.csv", z);
  CHECK(read_vector_csv("csv_complex.csv") == z);
  const Vector x = oracle::random_vector(9, rng);
  write_vector_csv("csv_real.csv", x);
  CHECK(read_vector_csv("csv_real.csv").real() == x);
  CHECK(read_vector_csv("csv_real.csv").imag().isZero(0.0));
  std::ofstream("csv_plain.csv") << "1\n2.5\n-3\n";
  CHECK(read_vector_csv("csv_plain.csv").real() == Vector{{1.0, 2.5, -3.0}});
  std::ofstream("csv_bad.csv") << "1\nfoo\n";
  CHECK_THROWS_AS(read_vector_csv("csv_bad.csv"), Error);
  for (const char* p : {"csv_complex.csv", "csv_real.csv", "csv_plain.csv", "csv_bad.csv"}) std::remove(p);
}

TEST_CASE("coefficient files are n-major") {
  const auto params = GaborParams::make(6, 2, 3);
  GaborCoefficients c{CMatrix(2, 3), params, false};
  for (Index n = 0; n < 3; ++n) {
    for (Index m = 0; m < 2; ++m) c.values(m, n) = Complex(static_cast<Real>(10 * n + m), -1.0);
  }
  write_coefficients_csv("csv_coeffs.csv", c);
  std::ifstream in("csv_coeffs.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "m,n,real,imag");
  std::getline(in, line);
  CHECK(line == "0,0,0,-1");
  std::getline(in, line);
  CHECK(line == "1,0,1,-1");
  std::getline(in, line);
  CHECK(line == "0,1,10,-1");
  std::remove("csv_coeffs.csv");
}
