#pragma once

#include <cstddef>
#include <vector>

#include "weld/error.hpp"

namespace weld {

// Partition of the time-grid indices into sequentially overlapping windows:
// boundaries[0]=0 < ... < boundaries[W]=T-1, adjacent windows sharing exactly
// the boundary grid point.
struct WindowLayout {
    std::vector<std::size_t> boundaries;

    std::size_t window_count() const { return boundaries.size() - 1; }
    std::size_t start(std::size_t i) const { return boundaries[i]; }
    std::size_t end(std::size_t i) const { return boundaries[i + 1]; }
    // number of propagator steps in window i (𝐓ᵢ ≥ 1)
    std::size_t steps(std::size_t i) const { return end(i) - start(i); }

    // Window owning time index k; a shared boundary belongs to the earlier
    // window, matching the half-open index sets used at inference.
    std::size_t owner(std::size_t k) const {
        for (std::size_t i = window_count(); i-- > 1;)
            if (k > start(i)) return i;
        return 0;
    }

    void validate(std::size_t n_steps) const;
};

// Near-equal partition of the T-1 grid steps; remainder steps go to the
// earliest windows.
WindowLayout split_windows(std::size_t n_steps, std::size_t n_windows);

}  // namespace weld
