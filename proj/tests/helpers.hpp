#pragma once

#include <string>
#include <vector>

#include "doctest.h"
#include "linalg.hpp"

namespace stabcx::test {

// Matrix from rows of element strings.
inline Mat M(const Ring& R, const std::vector<std::vector<std::string>>& rows) {
  size_t c = rows.empty() ? 0 : rows[0].size();
  Mat A = zeros(R, rows.size(), c);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < c; ++j) A(i, j) = R.parse(rows[i][j]);
  return A;
}

}  // namespace stabcx::test
