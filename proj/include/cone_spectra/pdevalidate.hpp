#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "cone_spectra/profile.hpp"

namespace cone_spectra {

/// Axisymmetric reduction of the cone to the (r, theta) rectangle
/// [r_min, r_max] x [0, theta_cap] with nr x ntheta cells. Each cell carries
/// the n-dimensional volume factor r^(n-1) sin^(n-2)(theta) at its centre.
struct MeridianGrid {
  std::pair<double, double> r_range{1.0, 2.0};
  std::pair<double, double> theta_range{0.0, kPi / 2 - 0.05};
  int nr = 32;
  int ntheta = 32;
  int n = 2;
  Eigen::MatrixXd weight;  // nr x ntheta

  MeridianGrid() = default;
  MeridianGrid(double r_min, double r_max, double theta_cap, int nr, int ntheta, int n);

  double dr() const { return (r_range.second - r_range.first) / nr; }
  double dtheta() const { return (theta_range.second - theta_range.first) / ntheta; }
  double r(int i) const { return r_range.first + i * dr(); }
  double theta(int j) const { return theta_range.first + j * dtheta(); }
};

struct MinimizerOptions {
  double gradient_reduction = 1e-9;  // target ||g|| / ||g0||
  double required_reduction = 1e-6;  // below this after the budget: NonConvergence
  long max_iterations = 100000;
  double regularization = 1e-10;  // relative to the boundary data scale
};

struct ValidationReport {
  double max_rel_deviation = 0.0;
  double max_abs_deviation = 0.0;
  double energy = 0.0;
  long iterations = 0;
  double gradient_reduction = 0.0;
  MeridianGrid grid;
  Eigen::MatrixXd solution;      // (nr+1) x (ntheta+1) nodal values
  std::vector<double> energy_trace;  // energy after each accepted step
  double boundary_min = 0.0, boundary_max = 0.0;
  double interior_min = 0.0, interior_max = 0.0;
};

/// Minimizes sum_cells w (u_r^2 + (u_theta/r)^2 + eps^2)^(p/2) dr dtheta over
/// the free nodes (all nodes off r = r_min, r = r_max, theta = theta_cap; the
/// axis is free) with u = r^lambda phi(theta) on the Dirichlet edges, and
/// compares the minimizer with that homogeneous extension.
ValidationReport minimize_energy(const MeridianGrid& grid, double lambda, const Profile& prof,
                                 double p, int n, const MinimizerOptions& options = {});

/// Same with arbitrary boundary data, compared against `exact`.
ValidationReport minimize_energy(const MeridianGrid& grid,
                                 const std::function<double(double, double)>& exact, double p,
                                 int n, const MinimizerOptions& options = {});

}  // namespace cone_spectra
