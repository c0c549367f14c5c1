#pragma once

#include <vector>

#include "lgmd/grid.hpp"
#include "lgmd/model.hpp"
#include "lgmd/params.hpp"

namespace harness {

// Straight-loop reference implementation of the whole per-frame pipeline.
// Shares only the data types with lgmd::Model, none of the computation;
// exists as the equivalence oracle for the optimised core.
std::vector<lgmd::FrameReport> oracle_process(const std::vector<lgmd::Frame>& frames,
                                              const lgmd::ModelParams& params);

} // namespace harness
