#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dslab/hypotheses.hpp"
#include "dslab/operators.hpp"
#include "dslab/solver.hpp"

namespace dslab {

/// Grayscale image, pixel values v/255 in row-major order (x fastest).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;
  std::string header;  ///< header bytes as read, reused on write; empty means canonical

  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Binary P5 with maxval 255 only. Throws std::runtime_error on anything else.
Image read_pgm(const std::string& path);
Image parse_pgm(const std::string& bytes);
/// Pixels are clamped to [0,1] and rounded to the nearest of 256 levels.
void write_pgm(const Image& img, const std::string& path);
std::string encode_pgm(const Image& img);

/// Grid with one unit cell per pixel; node k is pixel k.
Grid pixel_grid(int width, int height);

/// Anisotropic total variation Σ|Δx| + Σ|Δy| over neighbouring pixels.
double total_variation(const Image& img);

struct DenoiseParams {
  double eps = 0.5;
  double delta = 1.0;
  double alpha = 1.5;
  ExponentField p;  ///< sized to the image; empty means constant 2
  double mu = 1.0;
  double residual_tol = 1e-8;
  std::size_t max_iters = 50000;
  double initial_step = 1.0;
};

struct DenoiseResult {
  Image output;
  SolveResult solve;
  HypothesisReport hypotheses;
  double tv_input = 0.0;
  double tv_output = 0.0;
};

/// Edge-preserving operator plus fidelity f = μ(g − s) with g = input, solved
/// from U = g. Requires α ∈ (1,2) and p⁻ > α.
DenoiseResult denoise(const Image& input, const DenoiseParams& params);

}  // namespace dslab
