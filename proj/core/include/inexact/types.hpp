#pragma once

#include <Eigen/Dense>
#include <initializer_list>

namespace inexact {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Points and dual vectors share storage; Point marks primal-space arguments.
using Point = Eigen::VectorXd;

inline bool all_finite(const Vector& v) { return v.allFinite(); }

// Builds a point and rejects NaN/Inf entries with a DomainError.
Point make_point(const Vector& coords);
Point make_point(std::initializer_list<double> coords);

}  // namespace inexact
