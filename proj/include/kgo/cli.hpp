#pragma once

#include "kgo/evaluate.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kgo {

/// Plot-ready table; written as TSV.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_real(double v);
std::string to_tsv(const Table& t);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& bytes);

/// Writes via a temporary file and rename.
void write_atomically(const std::string& path, const std::string& contents);

/// Parses `kind:n`, kind in {monomial, chebyshev}; n functions per variable.
BasisSpec parse_basis(const std::string& text, int variables, BasisLayout layout);

/// Uniform grid of `points` on [-1, 1] with weights 2/points.
Sample grid_sample(int points, const std::function<double(double)>& label);

struct DemoOptions {
  int n = 7;
  int m = 0;  // 0: demo default
  int grid = 201;
  std::vector<double> ys{-0.6, 0.0, 0.4};
  TensorKind kind = TensorKind::ChristoffelProduct;
  SolverConfig solver;
  bool lsq_initial = false;
  std::string image_path;
};

Table demo_localized_states(const DemoOptions& o);
Table demo_square_wave(const DemoOptions& o);
Table demo_exact_map(const DemoOptions& o);
Table demo_image(const DemoOptions& o);

struct GrayImage {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::vector<int> pixels;  // row-major
};

GrayImage parse_pgm(const std::string& text);

/// Entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace kgo
