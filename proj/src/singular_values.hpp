// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace platelab::detail {

/// Non-increasing singular values of m (LAPACK zgesdd, values only).
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);

}  // namespace platelab::detail
