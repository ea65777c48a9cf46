"""Exact marginals and samplers for the insertion process.

The length-``n`` marginal assigns each word probability proportional to
its building count.  Two samplers are provided: an inverse-transform
sampler driven by the exact marginal table, and the stepwise insertion
sampler that grows a word one symbol at a time, choosing each (location,
vertex) pair with probability proportional to the product of edge weights
the insertion creates.  The two laws provably agree on uniform-weight
complete multipartite graphs; :func:`insertion_marginal_gap` reports their
exact total-variation distance on any graph rather than assuming
agreement.

Randomness contract: all samplers consume a Mersenne Twister stream
(:class:`random.Random`) seeded with the given integer, and convert each
64-bit draw into an index by exact integer arithmetic against the rational
cumulative table.  Identical seeds therefore reproduce identical batches
on any platform; each probability is realized to within ``2**-64``.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from scipy.stats import chi2 as _chi2

from .buildings import Word, BuildOrder, positive_words, _scaled_building
from .graphs import WeightedGraph

__all__ = [
    "Marginal",
    "SampleBatch",
    "GapIndependenceResult",
    "DeadEndError",
    "marginal",
    "stationarity_check",
    "sample_exact",
    "sample_insertion",
    "insertion_law",
    "insertion_marginal_gap",
    "empirical_gap_independence",
]

_DEFAULT_ENUMERATION_BOUND = 10 ** 7


class DeadEndError(RuntimeError):
    """Raised when every candidate insertion has weight zero."""


@dataclass(frozen=True)
class Marginal:
    """Exact word distribution of one window length.

    ``table`` maps each positive-count word to its probability; words
    outside the table have probability zero.  ``normalizer`` is the total
    building count over all words of this length.
    """

    length: int
    table: Mapping[Word, Fraction]
    normalizer: Fraction

    def probability(self, word: Sequence[int]) -> Fraction:
        return self.table.get(tuple(word), Fraction(0))


@dataclass(frozen=True)
class SampleBatch:
    """Reproducible batch of sampled words."""

    graph: WeightedGraph
    length: int
    seed: int
    words: tuple[Word, ...]

    def to_ndjson(self) -> str:
        return "\n".join(json.dumps(list(w)) for w in self.words)


def marginal(g: WeightedGraph, n: int,
             max_enumeration: int = _DEFAULT_ENUMERATION_BOUND) -> Marginal:
    """Exact length-``n`` marginal of the insertion process.

    Enumerates positive-weight words only; all other words have building
    count zero.  Rejected when ``q**n`` exceeds ``max_enumeration``.
    """
    if n < 1:
        raise ValueError("window length must be at least 1")
    if g.vertex_count ** n > max_enumeration:
        raise ValueError(
            f"enumeration bound exceeded: {g.vertex_count}**{n} > {max_enumeration}")
    scaled: dict[Word, int] = {}
    for word in positive_words(g, n):
        scaled[word] = _scaled_building(g, word)
    total = sum(scaled.values())
    if total == 0:
        raise ValueError("no word of this length has positive building count")
    table = {w: Fraction(v, total) for w, v in scaled.items() if v > 0}
    return Marginal(n, table, Fraction(total, g._den ** (2 * n - 2)))


def stationarity_check(g: WeightedGraph, n: int) -> tuple[bool, Fraction]:
    """Compare both one-symbol marginalizations of ``P_{n+1}`` with ``P_n``.

    Returns ``(consistent, defect)`` where ``defect`` is the largest
    absolute difference over words and sides; exact zero when consistent.
    """
    p_n = marginal(g, n)
    p_n1 = marginal(g, n + 1)
    drop_last: dict[Word, Fraction] = {}
    drop_first: dict[Word, Fraction] = {}
    for word, prob in p_n1.table.items():
        drop_last[word[:-1]] = drop_last.get(word[:-1], Fraction(0)) + prob
        drop_first[word[1:]] = drop_first.get(word[1:], Fraction(0)) + prob
    defect = Fraction(0)
    words = set(p_n.table) | set(drop_last) | set(drop_first)
    for w in words:
        base = p_n.table.get(w, Fraction(0))
        for side in (drop_last, drop_first):
            diff = abs(side.get(w, Fraction(0)) - base)
            if diff > defect:
                defect = diff
    return defect == 0, defect


def _draw_index(rng: random.Random, cumulative: list[int], total: int) -> int:
    """Exact inverse transform of a 64-bit uniform draw against integer masses."""
    u = rng.getrandbits(64)
    target = u * total
    lo, hi = 0, len(cumulative) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cumulative[mid] << 64 > target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def sample_exact(g: WeightedGraph, n: int, seed: int, count: int) -> SampleBatch:
    """IID draws from the exact marginal, deterministic given the seed."""
    if count < 0:
        raise ValueError("sample count must be nonnegative")
    if count == 0:
        return SampleBatch(g, n, seed, ())
    words: list[Word] = []
    masses: list[int] = []
    for word in positive_words(g, n):
        mass = _scaled_building(g, word)
        if mass > 0:
            words.append(word)
            masses.append(mass)
    if not words:
        raise ValueError("no word of this length has positive building count")
    cumulative = []
    running = 0
    for m in masses:
        running += m
        cumulative.append(running)
    rng = random.Random(seed)
    out = tuple(words[_draw_index(rng, cumulative, running)]
                for _ in range(count))
    return SampleBatch(g, n, seed, out)


def _insertion_candidates(g: WeightedGraph, word: list[int]) -> tuple[list[tuple[int, int, int]], int]:
    """Candidate (location, vertex, scaled weight) triples for one insertion.

    Weights are scaled to the common denominator squared so that end
    insertions (one edge factor) and interior insertions (two factors) are
    comparable integers.  The empty word admits every vertex with equal
    weight.
    """
    num = g._num
    den = g._den
    i = len(word)
    cands: list[tuple[int, int, int]] = []
    total = 0
    for j in range(i + 1):
        for v in range(g.vertex_count):
            left = num[word[j - 1]][v] if j > 0 else den
            if not left:
                continue
            right = num[v][word[j]] if j < i else den
            if not right:
                continue
            wgt = left * right
            cands.append((j, v, wgt))
            total += wgt
    return cands, total


def sample_insertion(g: WeightedGraph, n: int, seed: int) -> tuple[Word, BuildOrder]:
    """Grow one word of length ``n`` by weighted insertions.

    At each step a (location, vertex) pair is chosen with probability
    proportional to the product of the edge weights the insertion creates;
    end insertions carry one factor, interior insertions two.  Returns the
    word together with the build order it traced (``order[t]`` is the
    final position of the ``t``-th arrival).
    """
    if n < 0:
        raise ValueError("word length must be nonnegative")
    rng = random.Random(seed)
    word: list[int] = []
    arrival: list[int] = []
    for step in range(n):
        cands, total = _insertion_candidates(g, word)
        if total == 0:
            raise DeadEndError(
                f"no insertion has positive weight at length {step}")
        u = rng.getrandbits(64)
        target = u * total
        running = 0
        chosen = cands[-1]
        for cand in cands:
            running += cand[2]
            if running << 64 > target:
                chosen = cand
                break
        j, v, _ = chosen
        word.insert(j, v)
        arrival.insert(j, step)
    order = [0] * n
    for pos, t in enumerate(arrival):
        order[t] = pos
    return tuple(word), tuple(order)


def insertion_law(g: WeightedGraph, n: int) -> dict[Word, Fraction]:
    """Exact distribution of :func:`sample_insertion` outputs at length ``n``.

    Dynamic program over growing words; probabilities are exact rationals
    summing to one.
    """
    if n < 0:
        raise ValueError("word length must be nonnegative")
    states: dict[Word, Fraction] = {(): Fraction(1)}
    for _ in range(n):
        nxt: dict[Word, Fraction] = {}
        for word, prob in states.items():
            cands, total = _insertion_candidates(g, list(word))
            if total == 0:
                raise DeadEndError(
                    f"no insertion has positive weight from word {word}")
            for j, v, wgt in cands:
                child = word[:j] + (v,) + word[j:]
                nxt[child] = nxt.get(child, Fraction(0)) + prob * Fraction(wgt, total)
        states = nxt
    return states


def insertion_marginal_gap(g: WeightedGraph, n: int) -> Fraction:
    """Exact total-variation distance between the two length-``n`` laws."""
    law = insertion_law(g, n)
    marg = marginal(g, n).table
    words = set(law) | set(marg)
    diff = Fraction(0)
    for w in words:
        diff += abs(law.get(w, Fraction(0)) - marg.get(w, Fraction(0)))
    return diff / 2


@dataclass(frozen=True)
class GapIndependenceResult:
    """Chi-square test of a symbol pair against the product of exact marginals."""

    statistic: float
    p_value: float
    df: int
    gap: int
    sample_size: int

    def to_json_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "df": self.df,
            "gap": self.gap,
            "sample_size": self.sample_size,
        }


def empirical_gap_independence(batch: SampleBatch, gap: int) -> GapIndependenceResult:
    """Test independence of the symbols at positions ``0`` and ``gap + 1``.

    The null distribution of the pair is the product of the exact
    single-symbol marginals, a simple hypothesis, so the statistic is
    referred to chi-square with ``q*q - 1`` degrees of freedom.
    """
    if gap < 0:
        raise ValueError("gap must be nonnegative")
    if batch.length < gap + 2:
        raise ValueError(
            f"batch words of length {batch.length} are too short for gap {gap}")
    if not batch.words:
        raise ValueError("empty batch")
    g = batch.graph
    p1 = marginal(g, 1).table
    a, b = 0, gap + 1
    counts = Counter((w[a], w[b]) for w in batch.words)
    n = len(batch.words)
    stat = 0.0
    cells = 0
    for u in range(g.vertex_count):
        pu = p1.get((u,), Fraction(0))
        for v in range(g.vertex_count):
            pv = p1.get((v,), Fraction(0))
            expected = float(pu * pv) * n
            if expected == 0.0:
                continue
            observed = counts.get((u, v), 0)
            stat += (observed - expected) ** 2 / expected
            cells += 1
    df = cells - 1
    p_value = float(_chi2.sf(stat, df))
    return GapIndependenceResult(stat, p_value, df, gap, n)
