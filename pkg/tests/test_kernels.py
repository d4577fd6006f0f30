import os
import subprocess
import sys

import numpy as np
import pytest

from ocasbox import _pykernels, kernels
from ocasbox.search import SearchConfig, _candidates, shared_store

try:
    from ocasbox import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")
BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.NAME)
class TestEachBackend:
    def test_fwht_small(self, mod):
        assert mod.fwht(np.array([[1, 1, 1, 1]])).tolist() == [[4, 0, 0, 0]]
        assert mod.fwht(np.array([1, -1, -1, 1])).tolist() == [0, 0, 0, 4]

    def test_fwht_does_not_mutate(self, mod):
        a = np.array([[1, -1, 1, 1]], dtype=np.int64)
        mod.fwht(a)
        assert a.tolist() == [[1, -1, 1, 1]]

    def test_mobius_involution(self, mod):
        rng = np.random.default_rng(0)
        bits = rng.integers(0, 2, (50, 64)).astype(np.uint8)
        assert np.array_equal(mod.mobius(mod.mobius(bits)), bits)

    def test_scan_d4_counts(self, mod):
        store = shared_store(4)
        left, right = _candidates(store, SearchConfig(4))
        pb, pl, pr = mod.scan_block(store.scan, store.truth, left, right, store.b, True)
        assert len(pl) == 32 and int(pb.sum()) == 48


@needs_ext
class TestAgreement:
    def test_fwht(self):
        rng = np.random.default_rng(1)
        for size in (1, 2, 16, 256, 1024):
            a = rng.integers(-5, 5, (7, size))
            assert np.array_equal(_ckernels.fwht(a), _pykernels.fwht(a))

    def test_mobius(self):
        rng = np.random.default_rng(2)
        for size in (1, 8, 512):
            a = rng.integers(0, 2, (9, size)).astype(np.uint8)
            assert np.array_equal(_ckernels.mobius(a), _pykernels.mobius(a))

    @pytest.mark.parametrize("d", [3, 4, 5])
    @pytest.mark.parametrize("use_pb", [True, False])
    def test_scan_block(self, d, use_pb):
        store = shared_store(d)
        left, right = _candidates(store, SearchConfig(d, exclude_linear_rules=False))
        c = _ckernels.scan_block(store.scan, store.truth, left, right, store.b, use_pb)
        p = _pykernels.scan_block(store.scan, store.truth, left, right, store.b, use_pb)
        for x, y in zip(c, p):
            assert np.array_equal(np.asarray(x), np.asarray(y))

    def test_scan_block_d6_slice(self):
        store = shared_store(6)
        left, right = _candidates(store, SearchConfig(6, partition=(1000, 1004)))
        c = _ckernels.scan_block(store.scan, store.truth, left, right, store.b, True)
        p = _pykernels.scan_block(store.scan, store.truth, left, right, store.b, True)
        for x, y in zip(c, p):
            assert np.array_equal(np.asarray(x), np.asarray(y))


def test_backend_selection_env():
    env = dict(os.environ, OCASBOX_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from ocasbox import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None and not os.environ.get("OCASBOX_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"
