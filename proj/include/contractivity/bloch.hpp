#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "contractivity/channel.hpp"

namespace contractivity {

/// Affine action of a trace- and Hermiticity-preserving qubit map on Bloch
/// vectors: T(1 + w.sigma) = 1 + (r + R w).sigma.
struct BlochRep {
  Eigen::Vector3d r = Eigen::Vector3d::Zero();
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
};

/// Pauli matrices X, Y, Z.
const std::array<ComplexMatrix, 3>& pauli_matrices();

/// Throws std::invalid_argument unless T is a 2 -> 2 map that preserves
/// trace and Hermiticity.
BlochRep bloch_of(const SuperOp& t);
SuperOp channel_of(const BlochRep& b);

/// max over unit w of ||r + R w||_2 by dense sphere sampling plus local
/// refinement. The map is positive iff this is <= 1.
double bloch_max_image_radius(const BlochRep& b, int grid_points = 2000);

bool bloch_is_positive(const BlochRep& b, double tol = 1e-9);

/// Samples (r, R) with ||r||_2 + sigma_max(R) <= 1.
BlochRep random_positive_tp_bloch(std::uint64_t seed);
SuperOp random_positive_tp_qubit(std::uint64_t seed);

}  // namespace contractivity
