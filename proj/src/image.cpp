#include "dslab/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dslab {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(const std::string& s, std::size_t& pos) {
  for (;;) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos < s.size() && s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '#') ++pos;
  if (start == pos) throw std::runtime_error("malformed PGM header");
  return s.substr(start, pos - start);
}

int parse_positive(const std::string& tok) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw std::runtime_error("malformed PGM header field '" + tok + "'");
  }
  const long v = std::stol(tok);
  if (v <= 0 || v > 1'000'000) throw std::runtime_error("PGM header field out of range");
  return static_cast<int>(v);
}

std::string canonical_header(int w, int h) {
  return "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
}

}  // namespace

Image parse_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  const std::string magic = bytes.size() >= 2 ? bytes.substr(0, 2) : bytes;
  if (magic != "P5") throw std::runtime_error("unsupported image format (only binary P5 PGM)");
  pos = 2;
  Image img;
  img.width = parse_positive(next_token(bytes, pos));
  img.height = parse_positive(next_token(bytes, pos));
  const int maxval = parse_positive(next_token(bytes, pos));
  if (maxval != 255) throw std::runtime_error("PGM maxval must be 255");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw std::runtime_error("malformed PGM header terminator");
  }
  ++pos;
  if (img.width < 3 || img.height < 3) throw std::runtime_error("image must be at least 3x3");
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  if (bytes.size() != pos + count) throw std::runtime_error("PGM pixel data has the wrong length");
  img.header = bytes.substr(0, pos);
  img.pixels.resize(count);
  for (std::size_t k = 0; k < count; ++k) img.pixels[k] = static_cast<unsigned char>(bytes[pos + k]) / 255.0;
  return img;
}

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pgm(ss.str());
}

std::string encode_pgm(const Image& img) {
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  if (img.width < 3 || img.height < 3 || img.pixels.size() != count) throw std::invalid_argument("invalid image");
  std::string out = img.header.empty() ? canonical_header(img.width, img.height) : img.header;
  out.reserve(out.size() + count);
  for (double v : img.pixels) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
  }
  return out;
}

void write_pgm(const Image& img, const std::string& path) {
  const std::string bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Grid pixel_grid(int width, int height) {
  return build_grid(2, {width, height}, {double(width), double(height)});
}

double total_variation(const Image& img) {
  double tv = 0.0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (x + 1 < img.width) tv += std::abs(img.at(x + 1, y) - img.at(x, y));
      if (y + 1 < img.height) tv += std::abs(img.at(x, y + 1) - img.at(x, y));
    }
  }
  return tv;
}

DenoiseResult denoise(const Image& input, const DenoiseParams& params) {
  if (!(params.alpha > 1.0 && params.alpha < 2.0)) throw std::invalid_argument("denoising needs α in (1,2)");
  const Grid grid = pixel_grid(input.width, input.height);
  const ExponentField p = params.p.size() == 0 ? ExponentField::constant(2.0, grid.size()) : params.p;
  if (p.size() != grid.size()) throw std::invalid_argument("exponent field does not match the image");
  const OperatorFamily fam = make_image_operator(p, params.eps, params.delta, params.alpha);
  const SourceFamily src = make_fidelity_source(input.pixels, params.mu, params.alpha);

  DenoiseResult out;
  out.hypotheses = check_limit_monotone(fam, 32, 11);
  out.hypotheses.merge(check_monotone_ratio(fam, params.alpha, true, 32, 12));
  out.hypotheses.merge(check_source_hypotheses(src, 32, 13, p.p_minus));

  SolveConfig cfg;
  cfg.fam = &fam;
  cfg.src = &src;
  cfg.grid = &grid;
  cfg.init.values = input.pixels;
  cfg.residual_tol = params.residual_tol;
  cfg.max_iters = params.max_iters;
  cfg.initial_step = params.initial_step;
  out.solve = minimize(cfg);

  out.output.width = input.width;
  out.output.height = input.height;
  out.output.pixels = out.solve.U.values;
  out.tv_input = total_variation(input);
  out.tv_output = total_variation(out.output);
  return out;
}

}  // namespace dslab
