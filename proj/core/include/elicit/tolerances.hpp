#pragma once

namespace elicit {

// Central numeric tolerances. Algebraic identities are held to a much
// tighter bound than anything that comes out of an iterative solve.
struct Tolerances {
    double algebraic = 1e-12;  // norms, simplex sums, exact identities
    double solver = 1e-9;      // LP feasibility and interior margins
    double bisection = 1e-10;  // root-finding interval width
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace elicit
