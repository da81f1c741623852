"""Shared test data builders.

The patchy layout below has five series over 25 cases with complete counts
(25, 10, 8, 20, 10) and pairwise overlaps

    (1,2)=10 (1,3)=8 (1,4)=20 (1,5)=10
    (2,3)=2  (2,4)=7 (2,5)=4
    (3,4)=7  (3,5)=5
    (4,5)=8

so the effective-N arithmetic has exact reference values: 81/10 = 8.1 with
all pairs case-matched, 102/10 = 10.2 with none, and 9.0 / 20/3 / 10.0 when
restricted to the first 4 / 3 / 2 series.
"""

import numpy as np

from consilience import Dataset

PATCHY_COVERAGE = {
    "y1": set(range(1, 26)),
    "y2": {1, 2, 3, 4, 5, 6, 7, 21, 22, 23},
    "y3": {6, 7, 12, 13, 14, 15, 16, 24},
    "y4": set(range(1, 21)),
    "y5": {1, 2, 6, 8, 9, 12, 13, 14, 21, 24},
}


def make_patchy25_csv(seed: int = 20240517) -> str:
    rng = np.random.default_rng(seed)
    names = list(PATCHY_COVERAGE)
    lines = ["case," + ",".join(f"{n}_obs,{n}_mod" for n in names)]
    for case in range(1, 26):
        cells = [f"c{case:02d}"]
        for name in names:
            if case in PATCHY_COVERAGE[name]:
                obs = rng.uniform(0.0, 10.0)
                mod = obs + rng.normal(0.0, 1.0)
                cells.extend([repr(obs), repr(mod)])
            else:
                cells.extend(["", ""])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def restrict(dataset: Dataset, m: int) -> Dataset:
    """The same dataset limited to its first m series."""
    return Dataset(
        case_ids=dataset.case_ids,
        series=dataset.series[:m],
        case_match=dataset.case_match[:m, :m].copy(),
        importance=dataset.importance[:m].copy(),
    )


def all_unmatched(dataset: Dataset) -> Dataset:
    table = np.zeros((dataset.m, dataset.m), dtype=bool)
    np.fill_diagonal(table, True)
    return dataset.replace_weighting(case_match=table)
