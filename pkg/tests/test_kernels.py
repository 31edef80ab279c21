"""Backend agreement: the compiled kernels against the numpy fallback."""

import numpy as np
import pytest

import mfsteiner as mf
from mfsteiner import kernels
from mfsteiner.kernels import _pykernels

HAS_COMPILED = kernels.BACKEND == "compiled"

needs_compiled = pytest.mark.skipif(
    not HAS_COMPILED, reason="compiled kernels not built"
)


def _random_case(seed, n=40):
    inst = mf.gen_instance(n, mf.Seed(seed, "kern", 0))
    w = np.array(inst.full())
    return w


@needs_compiled
@pytest.mark.parametrize("seed", range(5))
def test_dijkstra_bitwise_equal(seed):
    w = _random_case(seed)
    n = w.shape[0]
    init = np.full(n, np.inf)
    init[0] = 0.0
    allowed = np.ones(n, dtype=np.uint8)
    allowed[5:9] = 0
    init_c = init.copy()
    from mfsteiner.kernels import _ckernels

    dc, pc, oc, sc = _ckernels.dijkstra(w, init_c, allowed, -1, -1)
    dp, pp, op, sp = _pykernels.dijkstra(w, init, allowed, -1, -1)
    assert sc == sp
    assert np.array_equal(dc, dp)
    assert np.array_equal(pc, pp)
    assert np.array_equal(oc[:sc], op[:sp])


@needs_compiled
@pytest.mark.parametrize("stop_after,stop_vertex", [(7, -1), (-1, 3), (1, -1)])
def test_dijkstra_early_stop_equal(stop_after, stop_vertex):
    w = _random_case(11)
    n = w.shape[0]
    init = np.full(n, np.inf)
    init[2] = 0.0
    allowed = np.ones(n, dtype=np.uint8)
    from mfsteiner.kernels import _ckernels

    dc, pc, oc, sc = _ckernels.dijkstra(w, init, allowed, stop_after, stop_vertex)
    dp, pp, op, sp = _pykernels.dijkstra(w, init, allowed, stop_after, stop_vertex)
    assert sc == sp
    assert np.array_equal(oc[:sc], op[:sp])
    assert np.array_equal(dc, dp)


@needs_compiled
@pytest.mark.parametrize("seed", range(3))
def test_all_ecc_agree(seed):
    w = _random_case(seed, n=60)
    from mfsteiner.kernels import _ckernels

    ec, fc = _ckernels.all_ecc(w)
    ep, fp = _pykernels.all_ecc(w)
    assert ec == pytest.approx(ep, rel=1e-12)
    assert np.array_equal(fc, fp)


@needs_compiled
@pytest.mark.parametrize("seed", range(5))
def test_prim_bitwise_equal(seed):
    w = _random_case(seed, n=50)
    from mfsteiner.kernels import _ckernels

    idx = np.arange(0, 50, 2, dtype=np.int64)
    assert _ckernels.prim_mst(w, idx) == _pykernels.prim_mst(w, idx)
    full = np.arange(50, dtype=np.int64)
    assert _ckernels.prim_mst(w, full) == _pykernels.prim_mst(w, full)


def test_dijkstra_multi_source_init():
    # two sources with nonzero potentials: result is min over sources
    w = _random_case(21, n=12)
    n = w.shape[0]
    allowed = np.ones(n, dtype=np.uint8)
    init = np.full(n, np.inf)
    init[0], init[5] = 0.1, 0.0
    dist, _, _, settled = kernels.dijkstra(w, init, allowed)
    assert settled == n
    for source, offset in ((0, 0.1), (5, 0.0)):
        single = np.full(n, np.inf)
        single[source] = 0.0
        d1, _, _, _ = kernels.dijkstra(w, single, allowed)
        assert np.all(dist <= d1 + offset + 1e-15)
    assert dist[5] == 0.0


def test_prim_singleton_is_zero():
    w = _random_case(2, n=6)
    assert kernels.prim_mst(w, np.array([3], dtype=np.int64)) == 0.0
