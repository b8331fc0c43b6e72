"""Which shifts almost map a configuration onto itself?

A shift tau is an eps-almost period when the windowed bottleneck distance
between D and D + tau stays below eps.  The scanner sweeps a grid of
candidate shifts and reports the covering radius: the edge of the largest
accepted-free ball, the finite surrogate for "the almost periods are
relatively dense".
"""

import numpy as np

from apsets import (
    PeriodScanSpec,
    Window,
    generate,
    group_property_check,
    perturbed_line,
    s_property_estimate,
    scan_periods,
    standard_corpus,
)

corpus = standard_corpus()


def sweep(d, eps, half, step, label):
    spec = PeriodScanSpec(eps=eps, search_box=Window("cube", np.zeros(d.dim), 2 * half),
                          grid_step=step)
    report = scan_periods(d, spec)
    print(f"{label:14s} eps={eps:<5} accepted={report.accepted.shape[0]:4d}"
          f"  covering radius={report.covering_radius:.3f}")
    return report


print("input           level      accepted   largest empty ball")
rep_z = sweep(corpus["lattice_z"], 0.2, 10.0, 0.05, "integer")
sweep(generate(perturbed_line()), 0.25, 10.0, 0.1, "perturbed")
sweep(corpus["union_z_sqrt2"], 0.15, 10.0, 0.05, "two lattices")
sweep(corpus["fibonacci"], 0.25, 10.0, 0.1, "fibonacci")
rep_p = sweep(corpus["poisson_1d"], 0.1, 10.0, 0.05, "poisson")

# a generic point scatter accepts nothing beyond the trivial |tau| < eps
# ball, and its covering radius stays near the box radius
print("\npoisson accepted shifts:", np.round(rep_p.accepted.ravel(), 3).tolist())

# sums and differences of accepted shifts are accepted at twice the level
violations = group_property_check(rep_z, corpus["lattice_z"], max_pairs=100, seed=0)
print("doubling-law violations on the integer lattice:", len(violations))

# the worst shift distance over sampled translations: 1/2 for the integers
print("uniform shift bound estimate on Z:",
      s_property_estimate(corpus["lattice_z"], [[0.5], [0.25], [0.7]]))
