#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <string>

namespace pointwave {

using Vec3 = Eigen::Vector3d;
using Cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Heaviside step, closed at the origin: theta(0) = 1.
inline double heaviside(double s) { return s >= 0.0 ? 1.0 : 0.0; }

/// Locale-independent formatting with 12 significant digits, used for all
/// numeric file output so repeated runs diff byte-identically.
std::string format_sig12(double v);

} // namespace pointwave
