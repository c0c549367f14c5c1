#pragma once

#include <cstddef>
#include <vector>

namespace lgmd {

// Row-major 2-D grid of doubles. Frames, photoreceptor outputs and every
// intermediate layer of the pipeline share this layout.
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Grid() = default;
    Grid(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t cell_count() const { return data.size(); }

    bool same_shape(const Grid& other) const {
        return width == other.width && height == other.height;
    }

    void fill(double v) { data.assign(data.size(), v); }
};

// A frame is a grid of luminance values in [0, 255].
using Frame = Grid;

// True when every cell is finite and within the luminance range.
bool frame_in_range(const Frame& frame);

} // namespace lgmd
