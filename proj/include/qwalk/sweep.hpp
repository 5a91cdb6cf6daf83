#pragma once
// Parameter sweeps over one or two axes, evaluated on a worker pool and
// gathered into deterministic result tables.
//
// Grid points where a numerical precondition fails (gap closed, transfer
// boundary, winding not resolved) are recorded in the table's status
// column instead of aborting the sweep; genuine usage errors still
// throw.  Row order is canonical (grid index, then within-point order),
// independent of scheduling.

#include <optional>
#include <string>

#include "qwalk/table.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

struct AxisSpec {
    std::string name; ///< one of "theta1", "theta2", "gamma"
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
};

enum class Task {
    spectrum_scan,
    phase_diagram,
    transfer_map,
    gbz,
    edge_modes,
    verify,
};

struct SweepSpec {
    // Axes are optional: a task with no axis runs once at `fixed`.
    // Grid point (i1, i2) maps to row block i1 * count2 + i2.
    std::optional<AxisSpec> axis1;
    std::optional<AxisSpec> axis2;
    WalkParams fixed;
    Task task = Task::spectrum_scan;
    int n_k = 512;   ///< momentum resolution for Bloch/winding/loop work
    int threads = 0; ///< 0: QWALK_THREADS env, else hardware concurrency

    void validate() const;
};

/// Evaluate the task at every grid point.  Columns depend on the task;
/// every row carries theta1, theta2, gamma, n_sites.  Table metadata
/// records the parameter set, grid, code version, tolerances, and the
/// plot schema keys consumed by emit_plot.
ResultTable run_sweep(const SweepSpec& spec);

} // namespace qwalk
