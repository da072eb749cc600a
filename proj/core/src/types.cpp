#include "inexact/types.hpp"

#include "inexact/errors.hpp"

namespace inexact {

Point make_point(const Vector& coords) {
  require(coords.allFinite(), ErrorCode::kDomainError, "point has non-finite coordinates");
  return coords;
}

Point make_point(std::initializer_list<double> coords) {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  return make_point(v);
}

}  // namespace inexact
