#include "lgmd/grid.hpp"

#include <cmath>

namespace lgmd {

bool frame_in_range(const Frame& frame) {
    if (frame.width <= 0 || frame.height <= 0) return false;
    if (frame.data.size() != static_cast<std::size_t>(frame.width) * frame.height) return false;
    for (double v : frame.data)
        if (!std::isfinite(v) || v < 0.0 || v > 255.0) return false;
    return true;
}

} // namespace lgmd
