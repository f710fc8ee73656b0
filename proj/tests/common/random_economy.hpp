#pragma once

#include <Eigen/Dense>

#include <random>

namespace test {

// Random productive economy: column sums of A stay below `max_colsum`.
struct RandomEconomy {
  Eigen::MatrixXd z;
  Eigen::MatrixXd y;
  Eigen::VectorXd x;
};

inline RandomEconomy random_economy(std::mt19937_64& rng, int regions, int sectors, double max_colsum = 0.9) {
  const int n = regions * sectors;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> demand(5.0, 100.0);
  Eigen::MatrixXd a(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) a(r, c) = u(rng);
    a.col(c) *= (max_colsum * u(rng)) / a.col(c).sum();
  }
  RandomEconomy e;
  e.y.resize(n, regions);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < regions; ++j) e.y(i, j) = demand(rng);
  // Output that exactly clears intermediate and final use.
  e.x = (Eigen::MatrixXd::Identity(n, n) - a).partialPivLu().solve(e.y.rowwise().sum());
  e.z = a * e.x.asDiagonal();
  return e;
}

}  // namespace test
