// Copyright 2026 The stereo_hunter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Rectangular linear sum assignment (Kuhn-Munkres with shortest augmenting
// paths and dual potentials, O(n^2 m)).

#pragma once

#include <Eigen/Core>

#include <limits>
#include <vector>

namespace hunter {

template <typename Scalar>
struct AssignmentResult {
  /// row_to_col[i] is the column assigned to row i, or -1.
  std::vector<int> row_to_col;
  Scalar total_cost = Scalar(0);
};

/// Minimum-cost one-to-one assignment. Every row is assigned when
/// rows <= cols, every column otherwise.
template <typename Derived>
AssignmentResult<typename Derived::Scalar> solve_assignment(
    const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());

  AssignmentResult<Scalar> result;
  result.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) return result;

  const bool transposed = rows > cols;
  const int n = transposed ? cols : rows;
  const int m = transposed ? rows : cols;
  auto at = [&](int i, int j) -> Scalar { return transposed ? cost(j, i) : cost(i, j); };

  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  // 1-based potentials; column 0 is the virtual source.
  std::vector<Scalar> u(n + 1, 0), v(m + 1, 0), min_slack(m + 1);
  std::vector<int> owner(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
      Scalar delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const Scalar reduced = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (int j = 1; j <= m; ++j) {
    if (owner[j] == 0) continue;
    const int r = transposed ? j - 1 : owner[j] - 1;
    const int c = transposed ? owner[j] - 1 : j - 1;
    result.row_to_col[r] = c;
    result.total_cost += cost(r, c);
  }
  return result;
}

}  // namespace hunter
