#include "weld/windows.hpp"

#include <string>

namespace weld {

void WindowLayout::validate(std::size_t n_steps) const {
    if (boundaries.size() < 2) throw DataError("WindowLayout: need at least one window");
    if (boundaries.front() != 0 || boundaries.back() != n_steps - 1)
        throw DataError("WindowLayout: boundaries must span [0, T-1]");
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i)
        if (boundaries[i] >= boundaries[i + 1])
            throw DataError("WindowLayout: boundaries must strictly increase");
}

WindowLayout split_windows(std::size_t n_steps, std::size_t n_windows) {
    if (n_steps < 2) throw DataError("split_windows: need at least 2 time steps");
    if (n_windows == 0) throw DataError("split_windows: need at least one window");
    const std::size_t total = n_steps - 1;
    if (n_windows > total)
        throw DataError("split_windows: " + std::to_string(n_windows) +
                        " windows exceed " + std::to_string(total) + " grid steps");
    WindowLayout layout;
    layout.boundaries.resize(n_windows + 1);
    const std::size_t base = total / n_windows;
    const std::size_t rem = total % n_windows;
    std::size_t cursor = 0;
    layout.boundaries[0] = 0;
    for (std::size_t i = 0; i < n_windows; ++i) {
        cursor += base + (i < rem ? 1 : 0);
        layout.boundaries[i + 1] = cursor;
    }
    layout.validate(n_steps);
    return layout;
}

}  // namespace weld
