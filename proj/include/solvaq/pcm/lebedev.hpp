#pragma once

#include <Eigen/Core>

#include <vector>

namespace solvaq::pcm {

struct LebedevPoint {
  Eigen::Vector3d direction;  // unit vector
  double weight;              // sums to 1 over the grid
};

/// Lebedev-Laikov angular grid on the unit sphere; sizes 110, 194, 302, 590.
const std::vector<LebedevPoint>& lebedev_grid(int n_points);
bool is_supported_grid(int n_points);

}  // namespace solvaq::pcm
