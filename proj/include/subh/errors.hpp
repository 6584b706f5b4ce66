#pragma once

#include <stdexcept>
#include <string>

namespace subh {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_dimension : error {
  using error::error;
};

struct invalid_argument : error {
  using error::error;
};

struct evaluation_error : error {
  using error::error;
};

struct quadrature_error : error {
  using error::error;
};

struct numeric_error : error {
  using error::error;
};

struct non_convergence : error {
  using error::error;
};

struct incompatible_loops : error {
  using error::error;
};

struct degenerate_loop : error {
  using error::error;
};

}  // namespace subh
