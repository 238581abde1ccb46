"""Diagnosis tasks over annotated motifs.

Three entry points: rank motifs by slowness, contrast two mined runs
structurally and statistically, and flag traces violating learned
co-occurrence rules.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from ._kernels import match_pattern
from .annotate import Motif, MotifSet
from .errors import ConfigMismatch, EmptySample, InvalidConfig
from .model import TraceStore

RANK_KEYS = ("p95", "mean", "total_impact")

IMPLIES = "implies"
EXCLUDES = "excludes"


def rank_slow_motifs(motifs: Sequence[Motif], key: str = "p95") -> list[Motif]:
    """Descending by the chosen execution-time statistic; ties by code."""
    if key == "p95":
        value = lambda m: float(m.exec_time_dist.summary.p95)
    elif key == "mean":
        value = lambda m: m.exec_time_dist.summary.mean
    elif key == "total_impact":
        value = lambda m: m.exec_time_dist.summary.mean * m.exec_time_dist.summary.count
    else:
        raise InvalidConfig(f"rank key must be one of {RANK_KEYS}, got {key!r}")
    return sorted(motifs, key=lambda m: (-value(m), m.code_str))


def ks_two_sample(x: Sequence[int], y: Sequence[int]) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov: (D, asymptotic p-value).

    D is the supremum distance between the two empirical CDFs; the p-value
    uses the Kolmogorov limiting distribution at sqrt(n1*n2/(n1+n2)) * D.
    """
    if not x or not y:
        raise EmptySample("ks_two_sample requires nonempty samples")
    xs = sorted(x)
    ys = sorted(y)
    n1, n2 = len(xs), len(ys)
    d = 0.0
    for v in set(xs) | set(ys):
        diff = abs(bisect_right(xs, v) / n1 - bisect_right(ys, v) / n2)
        if diff > d:
            d = diff
    en = math.sqrt(n1 * n2 / (n1 + n2))
    return d, _kolmogorov_sf(en * d)


def _kolmogorov_sf(lam: float) -> float:
    # Survival function of the Kolmogorov distribution, as the alternating
    # series 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lam^2).
    if lam < 1e-8:
        return 1.0
    total = 0.0
    for j in range(1, 101):
        term = 2.0 * (-1.0) ** (j - 1) * math.exp(-2.0 * j * j * lam * lam)
        total += term
        if abs(term) < 1e-16:
            break
    return min(1.0, max(0.0, total))


def benjamini_hochberg(p_values: Sequence[float]) -> list[float]:
    """Step-up adjusted p-values; reject where adjusted value <= alpha."""
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 1.0
    for rank in range(m, 0, -1):
        idx = order[rank - 1]
        running = min(running, p_values[idx] * m / rank)
        adjusted[idx] = running
    return adjusted


@dataclass(frozen=True)
class DiffEntry:
    code: str
    statistic: float
    p_value: float  # Benjamini-Hochberg adjusted
    direction: str  # "slower" | "faster" (candidate relative to baseline)


@dataclass(frozen=True)
class DiffReport:
    """Partition of both runs' motifs: added, removed, changed, unchanged."""

    added: tuple[str, ...]
    removed: tuple[str, ...]
    latency_changed: tuple[DiffEntry, ...]
    unchanged: int
    alpha: float

    @property
    def has_findings(self) -> bool:
        return bool(self.added or self.removed or self.latency_changed)


def diff_executions(baseline: MotifSet, candidate: MotifSet, alpha: float) -> DiffReport:
    """Structural set diff by canonical code plus KS tests on shared codes."""
    if baseline.config != candidate.config:
        raise ConfigMismatch(
            f"mining configs differ: {baseline.config} vs {candidate.config}"
        )
    if not 0.0 < alpha < 1.0:
        raise InvalidConfig(f"alpha must be in (0, 1), got {alpha}")
    b_codes = set(baseline.by_code)
    c_codes = set(candidate.by_code)
    added = tuple(sorted(c_codes - b_codes))
    removed = tuple(sorted(b_codes - c_codes))
    shared = sorted(b_codes & c_codes)
    stats = []
    p_values = []
    for code in shared:
        bx = baseline.by_code[code].exec_time_dist.require_samples()
        cy = candidate.by_code[code].exec_time_dist.require_samples()
        d, p = ks_two_sample(bx, cy)
        stats.append(d)
        p_values.append(p)
    adjusted = benjamini_hochberg(p_values)
    changed = []
    for code, d, p_adj in zip(shared, stats, adjusted):
        if p_adj <= alpha:
            b_mean = baseline.by_code[code].exec_time_dist.summary.mean
            c_mean = candidate.by_code[code].exec_time_dist.summary.mean
            direction = "slower" if c_mean >= b_mean else "faster"
            changed.append(DiffEntry(code, d, p_adj, direction))
    changed.sort(key=lambda e: (e.p_value, e.code))
    return DiffReport(
        added=added,
        removed=removed,
        latency_changed=tuple(changed),
        unchanged=len(shared) - len(changed),
        alpha=alpha,
    )


@dataclass(frozen=True)
class Rule:
    antecedent: str
    consequent: str
    kind: str  # IMPLIES | EXCLUDES
    confidence: float
    support_count: int


@dataclass(frozen=True)
class CooccurrenceModel:
    vocabulary: tuple[str, ...]
    rules: tuple[Rule, ...]


def train_cooccurrence(
    store: TraceStore,
    motifs: Sequence[Motif],
    min_support: int,
    conf_hi: float,
    conf_lo: float,
) -> CooccurrenceModel:
    """Learn implies/excludes rules from per-trace motif presence.

    For each ordered pair (a, b) whose antecedent occurs in at least
    min_support training traces: implies when P(b|a) >= conf_hi, with that
    conditional as the confidence; excludes when P(b|a) <= conf_lo, with
    confidence 1 - P(b|a).
    """
    if not 0.0 <= conf_lo < conf_hi <= 1.0:
        raise InvalidConfig(f"need 0 <= conf_lo < conf_hi <= 1, got ({conf_lo}, {conf_hi})")
    if min_support < 1:
        raise InvalidConfig(f"min_support must be >= 1, got {min_support}")
    universe = {t.trace_id for t in store.traces}
    presence = {
        m.code_str: frozenset(m.support.containing_traces) & universe
        for m in sorted(motifs, key=lambda m: m.code_str)
    }
    rules = []
    for a, ta in presence.items():
        if len(ta) < min_support:
            continue
        for b, tb in presence.items():
            if a == b:
                continue
            conf = len(ta & tb) / len(ta)
            if conf >= conf_hi:
                rules.append(Rule(a, b, IMPLIES, conf, len(ta)))
            elif conf <= conf_lo:
                rules.append(Rule(a, b, EXCLUDES, 1.0 - conf, len(ta)))
    rules.sort(key=lambda r: (r.antecedent, r.consequent, r.kind))
    return CooccurrenceModel(vocabulary=tuple(presence), rules=tuple(rules))


@dataclass(frozen=True)
class TraceAnomaly:
    trace_id: str
    score: float
    violated: tuple[Rule, ...]
    motifs_present: tuple[str, ...]


@dataclass(frozen=True)
class AnomalyReport:
    traces: tuple[TraceAnomaly, ...]  # descending score, then trace_id


def score_anomalies(
    model: CooccurrenceModel, test: TraceStore, motifs: Sequence[Motif]
) -> AnomalyReport:
    """Sum the confidences of violated rules per test trace.

    Presence means at least one embedding. An implies rule is violated
    when the antecedent is present without the consequent; an excludes
    rule when both sides are present.
    """
    patterns = {m.code_str: m.pattern for m in motifs}
    vocab = [code for code in model.vocabulary if code in patterns]
    entries = []
    for t in test.traces:
        present = set()
        for code in vocab:
            maps, _ = match_pattern(patterns[code], t.match_arrays, cap=1)
            if maps.shape[0]:
                present.add(code)
        violated = []
        for r in model.rules:
            if r.kind == IMPLIES:
                if r.antecedent in present and r.consequent not in present:
                    violated.append(r)
            elif r.antecedent in present and r.consequent in present:
                violated.append(r)
        score = sum(r.confidence for r in violated)
        entries.append(
            TraceAnomaly(t.trace_id, score, tuple(violated), tuple(sorted(present)))
        )
    entries.sort(key=lambda e: (-e.score, e.trace_id))
    return AnomalyReport(traces=tuple(entries))
