#pragma once

#include <cstdint>
#include <vector>

#include "bzgate/errors.hpp"

namespace bzgate {

// Scalar field on a regular grid, row-major, (x, y) = (column, row),
// row 0 at the top.
struct Field {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Field() = default;
    Field(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return data.size(); }
    bool same_shape(const Field& o) const { return width == o.width && height == o.height; }
};

// Per-cell excitability parameter (the light projection): low values are
// excitable, a narrow band is sub-excitable, high values kill waves.
using ExcitabilityField = Field;

enum class ExcitabilityClass { Excitable, SubExcitable, NonExcitable };

// Band edges for classify_excitability.
inline constexpr double kExcitableMax = 0.07;  // phi <  0.07
inline constexpr double kSubExcitableMax = 0.09;  // 0.07 <= phi <= 0.09

ExcitabilityClass classify_excitability(double phi);

struct SolverParams {
    double dt = 0.001;
    double dx = 0.25;
    double epsilon = 0.02;
    double f = 1.4;
    double q = 0.002;
    double d_u = 1.0;
    double d_v = 0.0;
    // Test hook: false turns the integrator into pure diffusion.
    bool reaction_enabled = true;

    // Throws std::invalid_argument on non-positive dt/dx/epsilon/q,
    // negative f/d_u/d_v, or an explicit-Euler-unstable dt.
    void validate() const;
};

struct MediumState {
    Field u;  // activator
    Field v;  // inhibitor
    int64_t step_index = 0;

    MediumState() = default;
    MediumState(int w, int h, double u0 = 0.0, double v0 = 0.0)
        : u(w, h, u0), v(w, h, v0) {}
};

// Five-point Laplacian at (row i, column j) with zero-flux boundaries
// (edge cells mirror their own value into the missing neighbour).
double laplacian5(const Field& f, int i, int j, double dx);

// One explicit Euler step into a preallocated destination state.
// Throws NumericalBlowUp if any updated value is non-finite or exceeds 2
// in magnitude. When u_rest is non-null (same shape as the grid) the
// maximum of u_new - u_rest over all cells is written to *max_excess;
// the harness uses it for quiescence detection without a second sweep.
void step_into(const MediumState& cur, MediumState& next,
               const ExcitabilityField& phi, const SolverParams& p,
               const Field* u_rest = nullptr, double* max_excess = nullptr);

// Pure-function form of step_into.
MediumState step(const MediumState& cur, const ExcitabilityField& phi,
                 const SolverParams& p);

struct RestState {
    double u = 0.0;
    double v = 0.0;
};

// Residual of the local kinetics at du/dt = dv/dt = 0 (so v = u):
// g(u) = u - u^2 - (f*u + phi)*(u - q)/(u + q).
double rest_residual(double u, double phi, const SolverParams& p);

// Spatially uniform rest state for a given phi, found by bisection on
// [q, 0.5] run down to floating-point resolution. Throws NoRoot if the
// bracket does not straddle a sign change.
RestState find_rest_state(double phi, const SolverParams& p);

} // namespace bzgate
