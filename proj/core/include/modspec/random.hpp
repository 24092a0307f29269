#pragma once

#include <cstdint>
#include <random>

#include "modspec/decomp.hpp"

namespace modspec {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  // Circular complex Gaussian with E|z|^2 = 1.
  cplx complex_normal();
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Complex white noise in frequency space multiplied by weight(xi); frequency representation.
SpatialField random_spectrum(const GridSpec& grid, Rng& rng,
                             const std::function<double(const Point&)>& weight);
// Box_k applied to white noise.
SpatialField random_box_field(const DecompositionFamily& fam, const Index& k, Rng& rng);
// White noise restricted to the ball |xi - centre| <= radius.
SpatialField random_ball_field(const GridSpec& grid, Rng& rng, double radius, const Point& centre = {});
// amplitude * exp(-|x - centre|^2 / (2 width^2)); physical representation.
SpatialField gaussian(const GridSpec& grid, double width, double amplitude = 1.0,
                      const Point& centre = {});

}  // namespace modspec
