"""Pure numpy implementations of the hot kernels.

Mirrors the API of the compiled ``_ckernels`` module. Used when the
extension is not built or when ``OCASBOX_PURE_PYTHON=1`` is set.
"""

import numpy as np

NAME = "python"


def fwht(values):
    """Walsh-Hadamard butterfly along the last axis.

    Accepts a 1-D or 2-D integer array whose last dimension is a power
    of two; returns a new int64 array.
    """
    a = np.array(values, dtype=np.int64, copy=True)
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        x = v[..., 0, :].copy()
        v[..., 0, :] += v[..., 1, :]
        v[..., 1, :] = x - v[..., 1, :]
        h *= 2
    return a


def mobius(bits):
    """Binary Moebius transform along the last axis (uint8 0/1 array)."""
    a = np.array(bits, dtype=np.uint8, copy=True)
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        v[..., 1, :] ^= v[..., 0, :]
        h *= 2
    return a


def _pb_mask(truth, left_tt, right_tts, d):
    quarter = 1 << (d - 2)
    full = (1 << (1 << d)) - 1
    f = np.uint64(left_tt)
    g = right_tts
    nf = np.uint64(~left_tt & full)
    ng = ~g & np.uint64(full)
    return (
        (np.bitwise_count(f & g) == quarter)
        & (np.bitwise_count(f & ng) == quarter)
        & (np.bitwise_count(nf & g) == quarter)
        & (np.bitwise_count(nf & ng) == quarter)
    )


def scan_block(tables, truth, left, right, b, use_pb):
    """Find orthogonal pairs between ``left`` and ``right`` rule indices.

    ``tables[i]`` holds the CA outputs of rule ``i`` on every 2b-bit input
    (any fixed column order), ``truth[i]`` its packed truth table.

    Returns ``(pb_counts, pair_left, pair_right)``: per-left counts of
    pairwise-balanced partners, and the orthogonal pairs found, ordered by
    left position then right position.
    """
    d = b + 1
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.uint64)
    pb_counts = np.zeros(len(left), dtype=np.int64)
    out_l, out_r = [], []
    right_tts = truth[right]
    size = tables.shape[1]
    for pos, i in enumerate(left):
        mask = _pb_mask(truth, int(truth[i]), right_tts, d)
        pb_counts[pos] = int(mask.sum())
        cands = right[mask] if use_pb else right
        if len(cands) == 0:
            continue
        codes = (tables[i].astype(np.uint16) << b) | tables[cands].astype(np.uint16)
        codes.sort(axis=1)
        ok = ~np.any(codes[:, 1:] == codes[:, :-1], axis=1) if size > 1 else np.ones(len(cands), bool)
        hits = cands[ok]
        out_l.extend([int(i)] * len(hits))
        out_r.extend(int(j) for j in hits)
    return pb_counts, np.array(out_l, dtype=np.int64), np.array(out_r, dtype=np.int64)
