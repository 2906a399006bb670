"""Sampling approximate-3-design elements at the binary-symplectic level.

One sample is: t independent uniform nonzero transvections, one uniform
PSL(2, 2^m) element, one uniform Pauli index (identity allowed), with

    composed = Z_{h_1} . Z_{h_2} ... Z_{h_t} . theta(psl)

as the collapsed symplectic action (right-action order: h_1 applies
first).  The Pauli factor acts trivially at the projective level but is
retained for unitary synthesis.  The step count t comes either from the
mixing-time bound at accuracy eps/N^3 or is given explicitly.

Reproducibility: sample i draws from the Philox substream keyed
(seed, i), so sequential and parallel generation produce byte-identical
streams.  Monte-Carlo statistics use their own substreams keyed
(seed, 2^64-1-batch) — descending from the top so they can never
collide with sample indices — making the statistics reports equally
reproducible and thread-count independent.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .gf2m import FieldContext
from .graph import (EdgeKind, OrbitInvariant, PauliPair, classify_pair,
                    orbit_invariant_vec)
from .kerdock import PslElement, psl_to_symplectic, sample_psl_vec
from .markov import mixing_time_bound
from .pauli import (PauliIndex, SymplecticMatrix, Transvection,
                    apply_symplectic, transvection_apply_vec,
                    transvection_matrix)

__all__ = [
    "SamplerConfig",
    "DesignSample",
    "steps_for_epsilon",
    "compose",
    "sample",
    "sample_at",
    "sample_stream",
    "write_jsonl",
    "read_jsonl",
    "ProbeStatistics",
    "PairStatistics",
    "pair_statistics",
    "pair_statistics_stream",
    "mc_sigma",
    "class_size",
]

Probe = Union[PauliIndex, PauliPair]


@dataclass(frozen=True)
class SamplerConfig:
    """Exactly one of epsilon / steps fixes the walk length."""

    m: int
    seed: int
    count: int
    epsilon: Optional[float] = None
    steps: Optional[int] = None

    def __post_init__(self) -> None:
        if (self.epsilon is None) == (self.steps is None):
            raise ValueError("set exactly one of epsilon and steps")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise ValueError("epsilon must be in (0, 1)")
        if self.steps is not None and self.steps < 0:
            raise ValueError("steps must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        if self.count < 0:
            raise ValueError("count must be non-negative")

    def resolved_steps(self) -> int:
        if self.steps is not None:
            return self.steps
        return steps_for_epsilon(self.m, self.epsilon)


def steps_for_epsilon(m: int, eps: float) -> int:
    """Walk length for a target accuracy: the mixing bound at eps/N^3."""
    return mixing_time_bound(m, eps / (1 << m) ** 3)


@dataclass(frozen=True)
class DesignSample:
    transvections: Tuple[Transvection, ...]
    psl: PslElement
    pauli: PauliIndex
    composed: SymplecticMatrix

    def to_json_line(self, index: int) -> str:
        m = self.composed.m
        width = (2 * m + 3) // 4
        return json.dumps({
            "index": index,
            "transvections": [[format(h.h1, "#x"), format(h.h2, "#x")]
                              for h in self.transvections],
            "psl": [format(x, "#x") for x in self.psl],
            "pauli": [format(self.pauli.a, "#x"), format(self.pauli.b, "#x")],
            "composed": [format(row, f"#0{width + 2}x") for row in self.composed.rows],
        }, sort_keys=True)

    @classmethod
    def from_json_line(cls, line: str, m: int) -> Tuple[int, "DesignSample"]:
        obj = json.loads(line)
        sample = cls(
            transvections=tuple(Transvection(int(h1, 16), int(h2, 16))
                                for h1, h2 in obj["transvections"]),
            psl=PslElement(*(int(x, 16) for x in obj["psl"])),
            pauli=PauliIndex(*(int(x, 16) for x in obj["pauli"])),
            composed=SymplecticMatrix(m, [int(r, 16) for r in obj["composed"]]),
        )
        return int(obj["index"]), sample


def compose(ctx: FieldContext, transvections: Sequence[Transvection],
            psl: PslElement) -> SymplecticMatrix:
    """Z_{h_1} ... Z_{h_t} theta(psl); h_1 acts first on row vectors."""
    out = SymplecticMatrix.identity(ctx.m)
    for h in transvections:
        out = out @ transvection_matrix(ctx, h)
    return out @ psl_to_symplectic(ctx, psl)


def _draw(ctx: FieldContext, steps: int, rng: np.random.Generator
          ) -> Tuple[Tuple[Transvection, ...], PslElement, PauliIndex]:
    """The frozen draw order: transvections, then PSL (two draws), then Pauli."""
    n = ctx.order
    ks = rng.integers(1, n * n, size=steps)
    transvections = tuple(Transvection(int(k) & (n - 1), int(k) >> ctx.m) for k in ks)
    k = int(rng.integers(1, n * n))
    alpha, gamma = k & (n - 1), k >> ctx.m
    j = int(rng.integers(0, n))
    if alpha != 0:
        beta, delta = j, ctx.div(1 ^ ctx.mul(j, gamma), alpha)
    else:
        beta, delta = ctx.inv(gamma), j
    p = int(rng.integers(0, n * n))
    return transvections, PslElement(alpha, beta, gamma, delta), \
        PauliIndex(p & (n - 1), p >> ctx.m)


def sample(config: SamplerConfig, rng: np.random.Generator,
           ctx: Optional[FieldContext] = None,
           psl_override: Optional[PslElement] = None) -> DesignSample:
    """One design sample from the given stream.

    ``psl_override`` pins the PSL factor (test hook; the random draws
    still advance the stream identically).
    """
    ctx = ctx or FieldContext(config.m)
    transvections, psl, pauli = _draw(ctx, config.resolved_steps(), rng)
    if psl_override is not None:
        psl = psl_override
    return DesignSample(transvections=transvections, psl=psl, pauli=pauli,
                        composed=compose(ctx, transvections, psl))


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, index],
                                                             dtype=np.uint64)))


def sample_at(config: SamplerConfig, index: int,
              ctx: Optional[FieldContext] = None) -> DesignSample:
    """Sample ``index`` of the stream, from the Philox substream (seed, index)."""
    return sample(config, _substream(config.seed, index), ctx)


def sample_stream(config: SamplerConfig, threads: int = 1) -> Iterator[DesignSample]:
    """The ``count`` samples, in index order, identical for any thread count."""
    ctx = FieldContext(config.m)
    if threads <= 1:
        for i in range(config.count):
            yield sample_at(config, i, ctx)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(lambda i: sample_at(config, i, ctx),
                            range(config.count), chunksize=64)


def write_jsonl(samples: Iterator[DesignSample], fh) -> int:
    count = 0
    for i, s in enumerate(samples):
        fh.write(s.to_json_line(i) + "\n")
        count += 1
    return count


def read_jsonl(fh, m: int) -> List[Tuple[int, DesignSample]]:
    return [DesignSample.from_json_line(line, m) for line in fh if line.strip()]


# --- Monte Carlo pair statistics ---


def class_size(ctx: FieldContext, probe: Probe) -> Tuple[str, int]:
    """(class name, class cardinality) for a probe vertex or pair."""
    n = ctx.order
    if isinstance(probe, PauliIndex) or (len(probe) == 2 and isinstance(probe[0], int)):
        return "vertices", n * n - 1
    kind = classify_pair(ctx, probe)
    if kind == EdgeKind.NON_EDGE:
        return "anticommuting_pairs", (n * n - 1) * n * n // 2
    return "commuting_pairs", (n * n - 1) * (n * n - 4) // 2


def mc_sigma(k: int, samples: int) -> float:
    """Scale of the Monte-Carlo fluctuation of empirical TV to uniform
    over a class of k outcomes: 0.5 sqrt(k / samples)."""
    return 0.5 * (k / samples) ** 0.5


@dataclass
class ProbeStatistics:
    probe: Probe
    class_name: str
    class_size: int
    samples: int
    tv_to_uniform: float
    orbit_histogram: Optional[Dict[OrbitInvariant, int]] = None

    def four_sigma(self) -> float:
        return 4.0 * mc_sigma(self.class_size, self.samples)


@dataclass
class PairStatistics:
    m: int
    steps: int
    samples: int
    probes: List[ProbeStatistics]

    def to_json(self) -> str:
        return json.dumps({
            "m": self.m,
            "steps": self.steps,
            "samples": self.samples,
            "probes": [{
                "probe": _probe_obj(p.probe),
                "class": p.class_name,
                "class_size": p.class_size,
                "tv_to_uniform": p.tv_to_uniform,
                "four_sigma": p.four_sigma(),
                "orbit_histogram": None if p.orbit_histogram is None else {
                    f"{inv.kind.name}:{inv.value:#x}": c
                    for inv, c in sorted(p.orbit_histogram.items())},
            } for p in self.probes],
        }, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        lines = ["probe,class,class_size,samples,tv_to_uniform,four_sigma"]
        for p in self.probes:
            lines.append(f"{_probe_name(p.probe)},{p.class_name},{p.class_size},"
                         f"{p.samples},{p.tv_to_uniform!r},{p.four_sigma()!r}")
        return "\n".join(lines) + "\n"


def _probe_obj(probe: Probe):
    if isinstance(probe[0], int):
        return [format(probe[0], "#x"), format(probe[1], "#x")]
    (a, b), (c, d) = probe
    return [[format(a, "#x"), format(b, "#x")], [format(c, "#x"), format(d, "#x")]]


def _probe_name(probe: Probe) -> str:
    if isinstance(probe[0], int):
        return f"vertex:{probe[0]:#x},{probe[1]:#x}"
    (a, b), (c, d) = probe
    return f"pair:{a:#x},{b:#x};{c:#x},{d:#x}"


def _normalize_probes(probes: Sequence[Probe]) -> List[Probe]:
    out: List[Probe] = []
    for probe in probes:
        if isinstance(probe[0], int):
            out.append(PauliIndex(*probe))
        else:
            out.append(PauliPair(PauliIndex(*probe[0]), PauliIndex(*probe[1])))
    return out


def _class_mask(ctx: FieldContext, name: str) -> np.ndarray:
    """Boolean membership over packed pair codes v * N^2 + w."""
    n = ctx.order
    v = np.arange(n * n, dtype=np.uint32)
    a, b = (v & (n - 1)).astype(np.uint16), (v >> ctx.m).astype(np.uint16)
    mul, tr = ctx.np_table("mul"), ctx.np_table("trace")
    det = mul[a[:, None], b[None, :]] ^ mul[b[:, None], a[None, :]]
    anti = tr[det] == 1
    commuting = ~anti
    nonzero = (v != 0)
    valid = nonzero[:, None] & nonzero[None, :] & (v[:, None] != v[None, :])
    mask = (anti if name == "anticommuting_pairs" else commuting) & valid
    return mask.ravel()


def pair_statistics(ctx: FieldContext, samples: Sequence[DesignSample],
                    probes: Sequence[Probe]) -> PairStatistics:
    """Exact (per-sample) statistics for explicit sample lists."""
    probes = _normalize_probes(probes)
    if not any(isinstance(p, PauliPair) for p in probes):
        raise ValueError("probes must include at least one pair")
    n = ctx.order
    counts = [np.zeros((n * n - 1) if isinstance(p, PauliIndex) else n ** 4,
                       dtype=np.int64) for p in probes]
    for s in samples:
        f = s.composed
        for i, probe in enumerate(probes):
            if isinstance(probe, PauliIndex):
                a, b = apply_symplectic(ctx, f, probe)
                counts[i][(a | (b << ctx.m)) - 1] += 1
            else:
                img = []
                for vert in probe:
                    a, b = apply_symplectic(ctx, f, vert)
                    img.append(a | (b << ctx.m))
                counts[i][img[0] * n * n + img[1]] += 1
    lengths = {len(s.transvections) for s in samples}
    steps = lengths.pop() if len(lengths) == 1 else None
    return _statistics_from_counts(ctx, probes, counts, len(samples), steps=steps)


def _statistics_from_counts(ctx: FieldContext, probes: List[Probe],
                            counts: List[np.ndarray], total: int,
                            steps: Optional[int]) -> PairStatistics:
    n = ctx.order
    stats = []
    for probe, hist in zip(probes, counts):
        name, k = class_size(ctx, probe)
        if isinstance(probe, PauliIndex):
            member = hist
        else:
            member = hist[_class_mask(ctx, name)]
            if int(member.sum()) != total:
                raise AssertionError("probe images escaped their pair class")
        tv = 0.5 * float(np.abs(member / total - 1.0 / k).sum())
        orbit_hist = None
        if isinstance(probe, PauliPair):
            codes = np.nonzero(hist)[0]
            va, wa = codes // (n * n), codes % (n * n)
            keys = orbit_invariant_vec(
                ctx, (va & (n - 1)).astype(np.uint16), (va >> ctx.m).astype(np.uint16),
                (wa & (n - 1)).astype(np.uint16), (wa >> ctx.m).astype(np.uint16))
            orbit_hist = {}
            for key in np.unique(keys):
                inv = OrbitInvariant(EdgeKind(int(key) >> 16), int(key) & 0xFFFF)
                orbit_hist[inv] = int(hist[codes[keys == key]].sum())
        stats.append(ProbeStatistics(probe=probe, class_name=name, class_size=k,
                                     samples=total, tv_to_uniform=tv,
                                     orbit_histogram=orbit_hist))
    return PairStatistics(m=ctx.m, steps=steps if steps is not None else -1,
                          samples=total, probes=stats)


def _stats_batch(ctx: FieldContext, config: SamplerConfig, probes: List[Probe],
                 batch_index: int, batch_size: int, steps: int) -> List[np.ndarray]:
    """Histogram contribution of one statistics batch (own substream)."""
    n = ctx.order
    rng = _substream(config.seed, 2 ** 64 - 1 - batch_index)
    ks = rng.integers(1, n * n, size=(steps, batch_size), dtype=np.uint32)
    h1 = (ks & (n - 1)).astype(np.uint16)
    h2 = (ks >> ctx.m).astype(np.uint16)
    alpha, beta, gamma, delta = sample_psl_vec(ctx, rng, batch_size)
    mul = ctx.np_table("mul")
    out = []
    for probe in probes:
        verts = [probe] if isinstance(probe, PauliIndex) else list(probe)
        images = []
        for vert in verts:
            a = np.full(batch_size, vert.a, dtype=np.uint16)
            b = np.full(batch_size, vert.b, dtype=np.uint16)
            for t in range(steps):
                a, b = transvection_apply_vec(ctx, h1[t], h2[t], a, b)
            ia = mul[a, alpha] ^ mul[b, gamma]
            ib = mul[a, beta] ^ mul[b, delta]
            images.append(ia.astype(np.int64) | (ib.astype(np.int64) << ctx.m))
        if len(images) == 1:
            out.append(np.bincount(images[0] - 1, minlength=n * n - 1))
        else:
            out.append(np.bincount(images[0] * n * n + images[1], minlength=n ** 4))
    return out


def pair_statistics_stream(config: SamplerConfig, probes: Sequence[Probe],
                           threads: int = 1, batch_size: int = 1 << 17
                           ) -> PairStatistics:
    """Monte-Carlo image statistics at scale, without materializing samples.

    Tracks only the probe images through the vectorized transvection and
    PSL kernels; the Pauli factor is never drawn here since it acts
    trivially on indices.  For a fixed ``batch_size`` the result is
    byte-identical for any ``threads`` value, because batch j always
    consumes the substream (seed, 2^64-1-j) and the merge is a sum.
    """
    ctx = FieldContext(config.m)
    probes = _normalize_probes(probes)
    if not any(isinstance(p, PauliPair) for p in probes):
        raise ValueError("probes must include at least one pair")
    steps = config.resolved_steps()
    n_batches = (config.count + batch_size - 1) // batch_size
    sizes = [min(batch_size, config.count - j * batch_size) for j in range(n_batches)]

    def run(j: int) -> List[np.ndarray]:
        return _stats_batch(ctx, config, probes, j, sizes[j], steps)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(n_batches)))
    else:
        parts = [run(j) for j in range(n_batches)]
    counts = [sum(p[i] for p in parts) for i in range(len(probes))]
    return _statistics_from_counts(ctx, probes, counts, config.count, steps)
