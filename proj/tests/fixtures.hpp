#pragma once

#include "multibump/limit_profile.hpp"

// Expensive shared state for the test binary, built once on first use.
namespace fixtures {

struct StripBundle {
    multibump::Grid grid;
    multibump::Nonlinearity f;
    multibump::DiscreteOperator op;
    multibump::BumpProfile profile;

    StripBundle(double xi_max, double h)
        : grid(multibump::Grid::strip(xi_max, h)),
          f(multibump::Nonlinearity::pure_power(3.0)),
          op(grid, 1.0),
          profile(multibump::solve_ground_state(op, f)) {}
};

inline const StripBundle& fine_strip() {
    static const StripBundle b(10.0, 0.05);
    return b;
}

inline const StripBundle& coarse_strip() {
    static const StripBundle b(10.0, 0.1);
    return b;
}

}  // namespace fixtures
