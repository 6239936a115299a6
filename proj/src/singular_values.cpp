// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "singular_values.hpp"

#include <algorithm>
#include <string>

#include <lapacke.h>

#include "platelab/error.hpp"

namespace platelab::detail {

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd work = m;
  const auto rows = static_cast<lapack_int>(m.rows());
  const auto cols = static_cast<lapack_int>(m.cols());
  Eigen::VectorXd s(std::min(m.rows(), m.cols()));
  const lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, 'N', rows, cols,
      reinterpret_cast<lapack_complex_double*>(work.data()), std::max<lapack_int>(rows, 1),
      s.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw NumericalError("singular value decomposition failed (zgesdd info " +
                         std::to_string(info) + ")");
  return s;
}

}  // namespace platelab::detail
