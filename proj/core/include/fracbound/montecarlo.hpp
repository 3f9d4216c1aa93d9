#pragma once

#include "fracbound/eigenbasis.hpp"
#include "fracbound/mixing.hpp"
#include "fracbound/rng.hpp"
#include "fracbound/subordinate.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fracbound {

struct McOptions {
    /// Euler step in operational time for the Brownian motion.
    double euler_step = 1e-3;
    /// Grid step of the subordinator path used for E_t.
    double subordinator_step = 1e-3;
    /// Weight each surviving step by the Brownian-bridge probability of not
    /// having touched a face in between.
    bool bridge_correction = false;
    unsigned threads = 0;
};

/// Brownian motion with generator Delta (variance 2 dt per axis) started at
/// `start`, run to operational time `horizon` and killed at the first grid
/// point outside the box.
struct KilledPathSample {
    Point start{};
    /// Grid positions including the start; filled only when recorded.
    std::vector<Point> path;
    bool exited = false;
    /// Operational time of the first grid point outside D (valid when exited).
    double exit_time = 0.0;
    Point terminal{};
    /// Bridge survival probability (1 without correction).
    double weight = 1.0;
};

KilledPathSample simulate_killed_path(const BoxDomain& dom, const Point& start, double horizon, double step,
                                      RandomStream& rng, bool bridge_correction = false, bool record = false);

struct MCEstimate {
    double t = 0.0;
    Point x{};
    double mean = 0.0;
    double se = 0.0;
    std::size_t paths = 0;
    double euler_step = 0.0;
    double subordinator_step = 0.0;
    bool bridge_correction = false;
};

/// u(t, x) = E_x[f(B(E_t)) 1{tau_D > E_t}] with E_t independent of B. Needs
/// at least 100 paths.
MCEstimate estimate_u(const BoxDomain& dom, const InitialDatum& f, const SubordinatorSpec& spec, double t,
                      const Point& x, std::size_t paths, std::uint64_t seed, const McOptions& opts = {});

struct CommutationLevel {
    double step = 0.0;    // operational grid step (Brownian and subordinator)
    double s_step = 0.0;  // physical-time grid for the composed path
    std::size_t disagreements = 0;
    std::size_t paths = 0;
    double rate = 0.0;
    double se = 0.0;
};

struct CommutationReport {
    std::vector<CommutationLevel> levels;
    bool non_increasing = true;
    double final_rate = 0.0;
};

struct CommutationOptions {
    /// Coarsest operational step; each level halves it.
    double base_step = 4e-3;
    std::size_t levels = 3;
    /// s-grid step relative to the typical subordinator increment on a cell,
    /// max_j c_j step^{1/beta_j}.
    double s_fraction = 0.5;
    unsigned threads = 0;
};

/// Per path and level, compares 1{X stays in D up to operational time E_t}
/// with 1{X(E_s) stays in D for s <= t on the s-grid}. Both indicators use the
/// same discrete Brownian and subordinator paths.
CommutationReport check_commutation(const BoxDomain& dom, const SubordinatorSpec& spec, double t, const Point& x,
                                    std::size_t paths, std::uint64_t seed, const CommutationOptions& opts = {});

struct CtrwReport {
    double c = 0.0;
    MeanEstimate ctrw;
    MCEstimate reference;
    double mean_jumps = 0.0;
    double z = 0.0;
};

struct CtrwOptions {
    /// Paths and discretization of the reference estimate_u run.
    std::size_t reference_paths = 10000;
    McOptions reference;
    unsigned threads = 0;
};

/// Walkers wait J with P(J > u | beta) = u^{-beta} / c (u >= c^{-1/beta}),
/// beta drawn from the normalized atoms, then jump by N(0, 2/(c m)) per axis,
/// m = mu(0, 1). Killed on leaving D. Compared with estimate_u at (t, x).
CtrwReport ctrw_check(const BoxDomain& dom, const InitialDatum& f, const MixingMeasure& m, double t, const Point& x,
                      std::size_t walkers, double c, std::uint64_t seed, const CtrwOptions& opts = {});

}  // namespace fracbound
