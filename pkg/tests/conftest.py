"""Shared fixtures.  The expensive Monte Carlo data sets are session-scoped
so the module invariants and the acceptance criteria share one computation."""

from time import perf_counter

import numpy as np
import pytest

import mfsteiner as mf


def pytest_terminal_summary(terminalreporter):
    """Replay the per-criterion lines after capture ends, so they show up
    under plain ``pytest`` too."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def z1_cdf_data():
    """10^4 simulated stage-1 durations and 10^4 graph-measured ones at
    (n=500, k=1)."""
    n, k, draws = 500, 1, 10**4
    m = int(np.ceil(mf.c_kn(n, k)))
    sim = np.array(
        [
            mf.simulate_stage_times(n, k, mf.Seed(606, "z1-sim", t).generator())[0]
            for t in range(draws)
        ]
    )
    measured = np.empty(draws)
    domain = range(1, n + 1)
    for t in range(draws):
        inst = mf.gen_instance(n, mf.Seed(606, "z1-measured", t))
        measured[t] = mf.grow_ball(inst, 1, domain, m).duration
    return sim, measured


@pytest.fixture(scope="session")
def ballgrow_2000():
    """200 staged-construction runs at n=2000, k=2 with the exact weights.

    Returns (records, elapsed_seconds)."""
    start = perf_counter()
    records = []
    for t in range(200):
        inst = mf.gen_instance(2000, mf.Seed(404, "ballgrow-accept", t))
        out = mf.ball_growth_tree(inst, 2)
        exact = mf.steiner_exact(inst, [1, 2]).weight
        records.append(
            {
                "status": out.status,
                "weight": out.weight,
                "certificate": out.certificate,
                "exact": exact,
                "normalized": None
                if out.weight is None
                else 2000 * out.weight / np.log(2000),
            }
        )
    return records, perf_counter() - start


@pytest.fixture(scope="session")
def w_convergence_reports():
    """W(2,0), W(1,1), W(0,2) experiments over n in {200, 500, 1000},
    200 trials each.  Returns (reports, elapsed_seconds)."""
    start = perf_counter()
    reports = {}
    for k, l in ((2, 0), (1, 1), (0, 2)):
        cfg = mf.ExperimentConfig(
            quantity="W",
            k=k,
            l=l,
            n_grid=(200, 500, 1000),
            trials=200,
            master_seed=11011,
            workers=2,
        )
        reports[(k, l)] = mf.run_experiment(cfg)
    return reports, perf_counter() - start
