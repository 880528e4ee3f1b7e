#pragma once

#include "pwave/common.hpp"

namespace pwave {

/// Matrix exponential by scaling and squaring with a degree-selected Pade
/// approximant (orders 3, 5, 7, 9, 13; Higham's backward-error thresholds).
Mat expm(const Mat& a);

}  // namespace pwave
