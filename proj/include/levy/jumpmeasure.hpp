#pragma once

#include <vector>

#include "levy/measure.hpp"
#include "levy/region.hpp"
#include "levy/simulate.hpp"

namespace levy {

// Times of recorded jumps whose size lies in B, in increasing order.
std::vector<double> jump_times_in(const PathSample& p, const BorelRegion& b);

// Number of B-jumps up to and including t; t must lie in [0, horizon].
std::size_t count_jumps(const PathSample& p, const BorelRegion& b, double t);

// Sum of f over sizes of B-jumps up to t.
double jump_integral(const PathSample& p, const ScalarFn& f, const BorelRegion& b,
                     double t);

// Sum of the B-jump sizes themselves up to t.
Vec jump_sum(const PathSample& p, const BorelRegion& b, double t);

// Compensated jump process: jump_sum minus t * (first moment of the measure
// over B). B must be bounded away from 0 for the compensator to exist.
Vec compensated_jump_process(const PathSample& p, const BorelRegion& b,
                             const LevyMeasure& m, double t);

// Diagnostic only: grid times whose skeleton increment exceeds
// factor * sqrt(Q_jj * dt) in some coordinate. Thresholding confounds
// diffusion with sub-grid jumps, so nothing downstream depends on it.
std::vector<double> detect_jump_candidates(const PathSample& p, const Mat& q,
                                           double factor = 6.0);

}  // namespace levy
