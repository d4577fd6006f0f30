"""Exhaustive search over pairs of bipermutive rules of a given diameter.

Rules are indexed by the integer value of their generating function, so
diameter ``d`` has ``2**(2**(d-2))`` rules. For every ordered pair that
passes the filters the Latin squares are tested for orthogonality; each
orthogonal pair's superposition S-box is then measured (nonlinearity, LCS
dimension, generator polynomial) and counted.
"""

from __future__ import annotations

import json
import multiprocessing
import os
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Optional

import numpy as np

from . import kernels
from .boolfun import LocalRule, TruthTable, bipermutive_from_generating
from .ca import SBox
from .codes import ORIENTATION_NOTE, Gf2Poly, PolynomialCode, generator_from_basis
from .errors import CheckpointError, ResourceError
from .sbox import lcs_bases_anf, sbox_nonlinearity

DIAMETERS = (3, 4, 5, 6)
DEFAULT_TABLE_BUDGET = 256 << 20
# left rules handed to the scan kernel per call
BLOCK = 64


def rule_count(d: int) -> int:
    return 1 << (1 << (d - 2))


@dataclass(frozen=True)
class SearchConfig:
    diameter: int
    use_pb_filter: bool = True
    exclude_linear_rules: bool = True
    worker_count: int = 1
    partition: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if self.diameter not in DIAMETERS:
            raise ValueError(f"diameter must be one of {DIAMETERS}, got {self.diameter}")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        if self.partition is not None:
            start, end = self.partition
            if not 0 <= start <= end <= rule_count(self.diameter):
                raise ValueError(
                    f"partition {self.partition} outside [0, {rule_count(self.diameter)})"
                )

    @property
    def left_range(self) -> tuple[int, int]:
        return self.partition if self.partition is not None else (0, rule_count(self.diameter))

    def settings(self) -> dict:
        return {
            "diameter": self.diameter,
            "use_pb_filter": self.use_pb_filter,
            "exclude_linear_rules": self.exclude_linear_rules,
        }


def pairwise_balanced(f: LocalRule, g: LocalRule) -> bool:
    """Each output pair (f(x), g(x)) in F_2^2 occurs exactly 2^(d-2) times."""
    if f.diameter != g.diameter:
        raise ValueError(f"diameter mismatch: {f.diameter} vs {g.diameter}")
    full = (1 << f.table.size) - 1
    a, b = f.table.value, g.table.value
    quarter = f.table.size // 4
    return all(
        c.bit_count() == quarter
        for c in (a & b, a & ~b & full, ~a & b & full, ~a & ~b & full)
    )


# ---------------------------------------------------------------------------
# precomputed rule tables


@dataclass(frozen=True)
class RuleTableStore:
    """CA outputs of every bipermutive rule of one diameter on all 2b-bit inputs.

    ``scan`` holds the tables with columns permuted by ``perm`` (scan column
    j is input ``perm[j]``): any fixed order works for the injectivity test,
    and a shuffled one finds collisions of non-orthogonal pairs sooner than
    row-major order, where the first 2^b probes can never collide.
    """

    diameter: int
    truth: np.ndarray
    degree: np.ndarray
    scan: np.ndarray
    perm: np.ndarray
    inv: np.ndarray

    @property
    def b(self) -> int:
        return self.diameter - 1

    def natural(self, indices) -> np.ndarray:
        """Tables of the given rules in input order, shape (k, 2^(2b))."""
        return self.scan[np.asarray(indices)][:, self.inv]

    def rule(self, index: int) -> LocalRule:
        return bipermutive_from_generating(TruthTable(self.diameter - 2, int(index)), self.diameter)


def _truth_tables(d: int) -> np.ndarray:
    gens = np.arange(rule_count(d), dtype=np.uint64)
    out = np.zeros_like(gens)
    for x in range(1 << d):
        mid = (x >> 1) & ((1 << (d - 2)) - 1)
        bit = ((gens >> np.uint64(mid)) & np.uint64(1)) ^ np.uint64(((x >> (d - 1)) ^ x) & 1)
        out |= bit << np.uint64(x)
    return out


def precompute_rule_tables(d: int, budget: int = DEFAULT_TABLE_BUDGET) -> RuleTableStore:
    if d not in DIAMETERS:
        raise ValueError(f"diameter must be one of {DIAMETERS}, got {d}")
    b = d - 1
    count = rule_count(d)
    size = 1 << (2 * b)
    if count * size > budget:
        raise ResourceError(f"rule tables need {count * size} bytes, budget is {budget}")
    truth = _truth_tables(d)

    bits = ((truth[:, None] >> np.arange(1 << d, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(np.uint8)
    anf = kernels.mobius(bits)
    weights = np.bitwise_count(np.arange(1 << d, dtype=np.uint32))
    degree = np.where(anf.any(axis=1), (anf * weights[None, :]).max(axis=1), 0).astype(np.int8)

    xs = np.arange(size, dtype=np.uint64)
    windows = [(xs >> np.uint64(2 * b - d - i)) & np.uint64((1 << d) - 1) for i in range(b)]
    tables = np.empty((count, size), dtype=np.uint8)
    step = 4096
    for lo in range(0, count, step):
        tt = truth[lo : lo + step, None]
        acc = np.zeros((tt.shape[0], size), dtype=np.uint8)
        for w in windows:
            acc = (acc << 1) | ((tt >> w[None, :]) & np.uint64(1)).astype(np.uint8)
        tables[lo : lo + step] = acc

    perm = np.random.default_rng(2 * b).permutation(size)
    inv = np.argsort(perm)
    scan = np.ascontiguousarray(tables[:, perm])
    return RuleTableStore(d, truth, degree, scan, perm, inv)


@lru_cache(maxsize=4)
def shared_store(d: int) -> RuleTableStore:
    return precompute_rule_tables(d)


# ---------------------------------------------------------------------------
# reports


def _poly_key(k: int, poly: int) -> str:
    return f"{k}:{poly:x}"


@dataclass
class SearchReport:
    diameter: int
    use_pb_filter: bool = True
    exclude_linear_rules: bool = True
    ranges: list = field(default_factory=list)
    total_pairs_scanned: int = 0
    pb_pairs: int = 0
    oca_pairs: int = 0
    oca_pairs_swap_reduced: int = 0
    by_nonlinearity: Counter = field(default_factory=Counter)
    by_dimension: Counter = field(default_factory=Counter)
    by_generator: Counter = field(default_factory=Counter)
    non_polynomial: int = 0
    non_bijective: int = 0
    wall_time: float = 0.0

    @classmethod
    def empty(cls, config: SearchConfig) -> "SearchReport":
        return cls(config.diameter, config.use_pb_filter, config.exclude_linear_rules)

    @property
    def n(self) -> int:
        return 2 * (self.diameter - 1)

    def settings(self) -> dict:
        return {
            "diameter": self.diameter,
            "use_pb_filter": self.use_pb_filter,
            "exclude_linear_rules": self.exclude_linear_rules,
        }

    def add_partial(self, p: dict):
        self.total_pairs_scanned += p["scanned"]
        self.pb_pairs += p["pb"]
        self.oca_pairs += p["oca"]
        self.oca_pairs_swap_reduced += p["oca_swap_reduced"]
        self.non_polynomial += p["non_polynomial"]
        self.non_bijective += p["non_bijective"]
        for key, c in p["nl"].items():
            self.by_nonlinearity[int(key)] += c
        for key, c in p["dim"].items():
            self.by_dimension[int(key)] += c
        for key, c in p["gen"].items():
            k, poly = key.split(":")
            self.by_generator[(int(k), int(poly, 16))] += c

    def generator_classes(self) -> list[tuple[int, Gf2Poly, int]]:
        keys = sorted(self.by_generator, key=lambda kv: (-kv[0], kv[1]))
        return [(k, Gf2Poly(p), self.by_generator[(k, p)]) for k, p in keys]

    def to_dict(self, include_timing: bool = True) -> dict:
        from .codes import divides

        classes = []
        for k, poly, count in self.generator_classes():
            code = PolynomialCode(self.n, k, poly, divides(poly, Gf2Poly((1 << self.n) | 1)))
            classes.append(
                {
                    "dimension": k,
                    "generator": str(poly),
                    "mask": poly.hex(),
                    "cyclic": code.cyclic,
                    "full_length": code.full_length,
                    "count": count,
                }
            )
        out = {
            **self.settings(),
            "ranges": [list(r) for r in self.ranges],
            "total_pairs_scanned": self.total_pairs_scanned,
            "pb_pairs": self.pb_pairs,
            "oca_pairs": self.oca_pairs,
            "oca_pairs_swap_reduced": self.oca_pairs_swap_reduced,
            "by_nonlinearity": {str(k): self.by_nonlinearity[k] for k in sorted(self.by_nonlinearity, reverse=True)},
            "by_dimension": {str(k): self.by_dimension[k] for k in sorted(self.by_dimension)},
            "generator_orientation": ORIENTATION_NOTE,
            "by_generator": classes,
            "non_polynomial": self.non_polynomial,
            "non_bijective": self.non_bijective,
        }
        if include_timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SearchReport":
        r = cls(data["diameter"], data["use_pb_filter"], data["exclude_linear_rules"])
        r.ranges = [tuple(x) for x in data["ranges"]]
        for name in ("total_pairs_scanned", "pb_pairs", "oca_pairs", "oca_pairs_swap_reduced",
                     "non_polynomial", "non_bijective"):
            setattr(r, name, data[name])
        r.by_nonlinearity = Counter({int(k): v for k, v in data["by_nonlinearity"].items()})
        r.by_dimension = Counter({int(k): v for k, v in data["by_dimension"].items()})
        r.by_generator = Counter(
            {(c["dimension"], int(c["mask"], 16)): c["count"] for c in data["by_generator"]}
        )
        r.wall_time = data.get("wall_time", 0.0)
        return r

    @classmethod
    def from_json(cls, text: str) -> "SearchReport":
        return cls.from_dict(json.loads(text))

    def table_rows(self) -> list[tuple[int, int, int, int, int]]:
        """Rows (diameter, nl, #nl, dim, #dim) in the layout of the summary table."""
        rows = []
        for nl in sorted(self.by_nonlinearity, reverse=True):
            count = self.by_nonlinearity[nl]
            if nl == 0:
                for dim in sorted(self.by_dimension):
                    rows.append((self.diameter, 0, count, dim, self.by_dimension[dim]))
            else:
                rows.append((self.diameter, nl, count, 0, count))
        return rows

    def to_csv(self) -> str:
        lines = ["diameter,nl,nl_count,dim,dim_count"]
        lines += [",".join(str(v) for v in row) for row in self.table_rows()]
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        parts = [f"{self.oca_pairs} OCA pairs"]
        parts += [f"nl={nl}: {self.by_nonlinearity[nl]}" for nl in sorted(self.by_nonlinearity, reverse=True)]
        parts += [f"dim {k}: {self.by_dimension[k]}" for k in sorted(self.by_dimension)]
        return ", ".join(parts)


def parse_table_csv(text: str) -> tuple[Counter, Counter]:
    """Inverse of :meth:`SearchReport.to_csv` for the count maps."""
    by_nl, by_dim = Counter(), Counter()
    lines = text.strip().splitlines()
    if not lines or lines[0] != "diameter,nl,nl_count,dim,dim_count":
        raise ValueError("not a report table")
    for line in lines[1:]:
        _, nl, nl_count, dim, dim_count = (int(v) for v in line.split(","))
        by_nl[nl] = nl_count
        if nl == 0:
            by_dim[dim] = dim_count
    return by_nl, by_dim


def _normalize_ranges(ranges) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for start, end in sorted(tuple(r) for r in ranges if r[0] < r[1]):
        if out and start < out[-1][1]:
            raise ValueError(f"overlapping partitions {out[-1]} and {(start, end)}")
        if out and start == out[-1][1]:
            out[-1] = (out[-1][0], end)
        else:
            out.append((start, end))
    return out


def merge_reports(a: SearchReport, b: SearchReport) -> SearchReport:
    if a.settings() != b.settings():
        raise ValueError(f"cannot merge reports with different settings: {a.settings()} vs {b.settings()}")
    out = SearchReport(a.diameter, a.use_pb_filter, a.exclude_linear_rules)
    out.ranges = _normalize_ranges(list(a.ranges) + list(b.ranges))
    for name in ("total_pairs_scanned", "pb_pairs", "oca_pairs", "oca_pairs_swap_reduced",
                 "non_polynomial", "non_bijective", "wall_time"):
        setattr(out, name, getattr(a, name) + getattr(b, name))
    for name in ("by_nonlinearity", "by_dimension", "by_generator"):
        setattr(out, name, getattr(a, name) + getattr(b, name))
    return out


# ---------------------------------------------------------------------------
# enumeration and scanning


def _candidates(store: RuleTableStore, config: SearchConfig) -> tuple[np.ndarray, np.ndarray]:
    allowed = store.degree >= 2 if config.exclude_linear_rules else np.ones(len(store.truth), bool)
    start, end = config.left_range
    left = np.flatnonzero(allowed[start:end]) + start
    right = np.flatnonzero(allowed)
    return left.astype(np.int64), right.astype(np.int64)


def enumerate_pairs(config: SearchConfig) -> Iterator[tuple[LocalRule, LocalRule]]:
    """Every ordered pair of bipermutive rules admitted by ``config``."""
    d = config.diameter
    rules = [bipermutive_from_generating(TruthTable(d - 2, v), d) for v in range(rule_count(d))]
    degree = shared_store(d).degree
    start, end = config.left_range
    for i in range(start, end):
        if config.exclude_linear_rules and degree[i] < 2:
            continue
        for j in range(len(rules)):
            if config.exclude_linear_rules and degree[j] < 2:
                continue
            if config.use_pb_filter and not pairwise_balanced(rules[i], rules[j]):
                continue
            yield rules[i], rules[j]


def _new_partial() -> dict:
    return {
        "scanned": 0, "pb": 0, "oca": 0, "oca_swap_reduced": 0,
        "nl": {}, "dim": {}, "gen": {}, "non_polynomial": 0, "non_bijective": 0,
    }


def _bump(d: dict, key, by: int = 1):
    d[key] = d.get(key, 0) + by


def analyze_pairs(store: RuleTableStore, left: np.ndarray, right: np.ndarray):
    """(nl, lcs_basis, code, bijective) for the superposition S-box of each pair."""
    b = store.b
    n = 2 * b
    if len(left) == 0:
        return []
    tables = (store.natural(left).astype(np.uint32) << b) | store.natural(right).astype(np.uint32)
    bijective = np.all(np.sort(tables, axis=1) == np.arange(1 << n, dtype=np.uint32), axis=1)
    bases = lcs_bases_anf(tables, n)
    out = []
    for row, basis, bij in zip(tables, bases, bijective):
        if basis:
            out.append((0, basis, generator_from_basis(basis, n), bool(bij)))
        else:
            out.append((sbox_nonlinearity(SBox(n, row)), basis, None, bool(bij)))
    return out


def scan_lefts(store: RuleTableStore, config: SearchConfig, left: np.ndarray, right: np.ndarray):
    """Per-left partial counts for a block of left rules."""
    pb_counts, pl, pr = kernels.scan_block(store.scan, store.truth, left, right, store.b, config.use_pb_filter)
    partials = {int(i): _new_partial() for i in left}
    for pos, i in enumerate(left):
        p = partials[int(i)]
        p["scanned"] = len(right)
        p["pb"] = int(pb_counts[pos])
    for i, j, (nl, basis, code, bij) in zip(pl, pr, analyze_pairs(store, pl, pr)):
        p = partials[int(i)]
        p["oca"] += 1
        if i < j:
            p["oca_swap_reduced"] += 1
        if not bij:
            p["non_bijective"] += 1
        _bump(p["nl"], str(nl))
        if nl == 0:
            _bump(p["dim"], str(len(basis)))
            if code is None:
                p["non_polynomial"] += 1
            else:
                _bump(p["gen"], _poly_key(code.k, code.generator.value))
    return sorted(partials.items())


_WORKER: dict = {}


def _worker_scan(block):
    return scan_lefts(_WORKER["store"], _WORKER["config"], block, _WORKER["right"])


# ---------------------------------------------------------------------------
# checkpoints


def _read_checkpoint(path: str, config: SearchConfig) -> dict[int, dict]:
    done: dict[int, dict] = {}
    if not os.path.exists(path):
        return done
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CheckpointError(f"{path}:{lineno}: {exc}") from None
            if "config" in rec:
                if rec["config"] != config.settings():
                    raise CheckpointError(f"{path}: checkpoint was written for {rec['config']}")
                continue
            try:
                done[int(rec["left_index"])] = rec["partial_counts"]
            except (KeyError, TypeError, ValueError):
                raise CheckpointError(f"{path}:{lineno}: malformed record") from None
    return done


def run_search(
    config: SearchConfig,
    checkpoint: Optional[str] = None,
    progress: Optional[Callable[[int, int, int], None]] = None,
    store: Optional[RuleTableStore] = None,
) -> SearchReport:
    """Scan every admitted ordered pair and aggregate the results.

    With ``checkpoint`` set, one record per completed left rule is
    appended to that file and already-recorded left rules are skipped, so
    an interrupted run resumes where it stopped.
    """
    t0 = time.perf_counter()
    store = store if store is not None else shared_store(config.diameter)
    left, right = _candidates(store, config)
    report = SearchReport.empty(config)
    report.ranges = _normalize_ranges([config.left_range])

    done: dict[int, dict] = {}
    ck = None
    if checkpoint:
        done = _read_checkpoint(checkpoint, config)
        fresh = not os.path.exists(checkpoint) or os.path.getsize(checkpoint) == 0
        ck = open(checkpoint, "a", encoding="utf-8")
        if fresh:
            ck.write(json.dumps({"config": config.settings()}) + "\n")
    for i in left:
        if int(i) in done:
            report.add_partial(done[int(i)])
    todo = np.array([i for i in left if int(i) not in done], dtype=np.int64)

    total = len(left) * len(right)
    scanned = (len(left) - len(todo)) * len(right)
    blocks = [todo[k : k + BLOCK] for k in range(0, len(todo), BLOCK)]

    def consume(results):
        nonlocal scanned
        for i, partial in results:
            report.add_partial(partial)
            scanned += partial["scanned"]
            if ck is not None:
                ck.write(json.dumps({"left_index": i, "partial_counts": partial}) + "\n")
        if ck is not None:
            ck.flush()
        if progress is not None:
            progress(scanned, total, report.oca_pairs)

    try:
        if config.worker_count > 1 and len(blocks) > 1:
            _WORKER.update(store=store, config=config, right=right)
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(config.worker_count) as pool:
                for results in pool.imap(_worker_scan, blocks):
                    consume(results)
        else:
            for block in blocks:
                consume(scan_lefts(store, config, block, right))
    finally:
        _WORKER.clear()
        if ck is not None:
            ck.close()
    report.wall_time = time.perf_counter() - t0
    return report


def stderr_progress(min_interval: float = 1.0):
    """Progress callback printing ``scanned/total (percent), oca found``."""
    last = [0.0]

    def report(scanned: int, total: int, oca: int):
        now = time.monotonic()
        if now - last[0] < min_interval and scanned < total:
            return
        last[0] = now
        pct = 100.0 * scanned / total if total else 100.0
        print(f"{scanned}/{total} ({pct:.1f}%), {oca} oca found", file=sys.stderr, flush=True)

    return report
