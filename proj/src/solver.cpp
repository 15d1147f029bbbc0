#include "bzgate/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bzgate {

ExcitabilityClass classify_excitability(double phi) {
    if (phi < kExcitableMax) return ExcitabilityClass::Excitable;
    if (phi <= kSubExcitableMax) return ExcitabilityClass::SubExcitable;
    return ExcitabilityClass::NonExcitable;
}

void SolverParams::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(dx > 0.0)) throw std::invalid_argument("dx must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
    if (f < 0.0) throw std::invalid_argument("f must be non-negative");
    if (d_u < 0.0 || d_v < 0.0) throw std::invalid_argument("diffusion coefficients must be non-negative");
    const double dmax = d_u > d_v ? d_u : d_v;
    if (dmax > 0.0) {
        const double dt_limit = dx * dx / (4.0 * dmax);
        if (dt > dt_limit)
            throw std::invalid_argument("dt " + std::to_string(dt) +
                                        " exceeds explicit stability limit " +
                                        std::to_string(dt_limit));
    }
}

double laplacian5(const Field& f, int i, int j, double dx) {
    const int jm = j > 0 ? j - 1 : j;
    const int jp = j < f.width - 1 ? j + 1 : j;
    const int im = i > 0 ? i - 1 : i;
    const int ip = i < f.height - 1 ? i + 1 : i;
    const double c = f.at(j, i);
    return (f.at(jm, i) + f.at(jp, i) + f.at(j, im) + f.at(j, ip) - 4.0 * c) / (dx * dx);
}

namespace {

// Inner sweep shared by every (reaction, v-diffusion, rest-tracking)
// combination. Branch-free interior loop; edge columns handled apart so
// the compiler can vectorise the middle.
template <bool REACT, bool VDIFF, bool REST>
void sweep(const MediumState& cur, MediumState& next, const ExcitabilityField& phi,
           const SolverParams& p, const Field* u_rest, double* max_excess,
           double& out_max, double& out_checksum) {
    const int W = cur.u.width, H = cur.u.height;
    const double dt = p.dt;
    const double dt_over_eps = p.dt / p.epsilon;
    const double cu = p.dt * p.d_u / (p.dx * p.dx);
    const double cv = p.dt * p.d_v / (p.dx * p.dx);
    const double f = p.f, q = p.q;

    double mx = 0.0;
    double checksum = 0.0;
    double excess = -std::numeric_limits<double>::infinity();

    const double* ub = cur.u.data.data();
    const double* vb = cur.v.data.data();
    const double* pb = phi.data.data();
    const double* rb = REST ? u_rest->data.data() : nullptr;
    double* un_b = next.u.data.data();
    double* vn_b = next.v.data.data();

    for (int y = 0; y < H; ++y) {
        const size_t row = static_cast<size_t>(y) * W;
        const double* uc = ub + row;
        const double* uu = ub + static_cast<size_t>(y > 0 ? y - 1 : y) * W;
        const double* ud = ub + static_cast<size_t>(y < H - 1 ? y + 1 : y) * W;
        const double* vc = vb + row;
        const double* vu = vb + static_cast<size_t>(y > 0 ? y - 1 : y) * W;
        const double* vd = vb + static_cast<size_t>(y < H - 1 ? y + 1 : y) * W;
        const double* pc = pb + row;
        double* ur = un_b + row;
        double* vr = vn_b + row;

        for (int x = 0; x < W; ++x) {
            const int xm = x > 0 ? x - 1 : x;
            const int xp = x < W - 1 ? x + 1 : x;
            const double U = uc[x];
            const double V = vc[x];
            const double lap_u = uc[xm] + uc[xp] + uu[x] + ud[x] - 4.0 * U;

            double du = cu * lap_u;
            double dv = dt * (U - V);
            if constexpr (REACT) {
                // |U| in the denominator keeps the switching ratio on its
                // saturating branch (exactly -1) when an Euler overshoot
                // lands below zero, instead of crossing the U = -q pole.
                // For U >= 0 it is the plain rational factor, bit for bit.
                const double Uabs = U < 0.0 ? -U : U;
                du += dt_over_eps * (U - U * U - (f * V + pc[x]) * (U - q) / (Uabs + q));
            } else {
                dv = 0.0;
            }
            if constexpr (VDIFF) {
                dv += cv * (vc[xm] + vc[xp] + vu[x] + vd[x] - 4.0 * V);
            }
            const double un = U + du;
            const double vn = V + dv;
            ur[x] = un;
            vr[x] = vn;

            const double au = un < 0.0 ? -un : un;
            const double av = vn < 0.0 ? -vn : vn;
            mx = mx > au ? mx : au;
            mx = mx > av ? mx : av;
            checksum += un + vn;
            if constexpr (REST) {
                const double e = un - rb[row + x];
                excess = excess > e ? excess : e;
            }
        }
    }
    out_max = mx;
    out_checksum = checksum;
    if constexpr (REST) *max_excess = excess;
}

} // namespace

void step_into(const MediumState& cur, MediumState& next, const ExcitabilityField& phi,
               const SolverParams& p, const Field* u_rest, double* max_excess) {
    if (!cur.u.same_shape(cur.v) || !cur.u.same_shape(phi))
        throw std::invalid_argument("state and excitability field shapes differ");
    if (u_rest && !cur.u.same_shape(*u_rest))
        throw std::invalid_argument("rest field shape differs from state");
    if (!next.u.same_shape(cur.u)) next.u = Field(cur.u.width, cur.u.height);
    if (!next.v.same_shape(cur.v)) next.v = Field(cur.v.width, cur.v.height);

    double mx = 0.0, checksum = 0.0;
    const bool rest = u_rest && max_excess;
    if (p.reaction_enabled) {
        if (p.d_v != 0.0) {
            if (rest) sweep<true, true, true>(cur, next, phi, p, u_rest, max_excess, mx, checksum);
            else      sweep<true, true, false>(cur, next, phi, p, nullptr, nullptr, mx, checksum);
        } else {
            if (rest) sweep<true, false, true>(cur, next, phi, p, u_rest, max_excess, mx, checksum);
            else      sweep<true, false, false>(cur, next, phi, p, nullptr, nullptr, mx, checksum);
        }
    } else {
        if (p.d_v != 0.0) sweep<false, true, false>(cur, next, phi, p, nullptr, nullptr, mx, checksum);
        else              sweep<false, false, false>(cur, next, phi, p, nullptr, nullptr, mx, checksum);
        if (rest) *max_excess = 0.0;
    }
    // NaN poisons the checksum even when the running max misses it.
    if (!(mx <= 2.0) || !std::isfinite(checksum))
        throw NumericalBlowUp("field magnitude exceeded 2 (or went non-finite) at step " +
                              std::to_string(cur.step_index + 1));
    next.step_index = cur.step_index + 1;
}

MediumState step(const MediumState& cur, const ExcitabilityField& phi, const SolverParams& p) {
    MediumState next(cur.u.width, cur.u.height);
    step_into(cur, next, phi, p);
    return next;
}

double rest_residual(double u, double phi, const SolverParams& p) {
    return u - u * u - (p.f * u + phi) * (u - p.q) / (u + p.q);
}

RestState find_rest_state(double phi, const SolverParams& p) {
    double lo = p.q, hi = 0.5;
    double glo = rest_residual(lo, phi, p);
    double ghi = rest_residual(hi, phi, p);
    if (glo == 0.0) return {lo, lo};
    if (ghi == 0.0) return {hi, hi};
    if ((glo > 0.0) == (ghi > 0.0))
        throw NoRoot("rest-state residual does not change sign on [q, 0.5] for phi=" +
                     std::to_string(phi));
    // run the bisection down to rounding: the residual slope near the root
    // reaches ~50, so an interval of 1e-10 would leave |g| in the 1e-9 range
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = rest_residual(mid, phi, p);
        if (gm == 0.0) return {mid, mid};
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    const double u = 0.5 * (lo + hi);
    return {u, u};
}

} // namespace bzgate
