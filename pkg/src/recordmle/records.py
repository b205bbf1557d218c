"""Upper record values: extraction from sequences and simulation.

An observation in a sequence is an upper record when it strictly exceeds
every earlier observation; the first observation is always a record. For a
family member with transform A and rate B(theta), the transformed record
values A(R_1) < A(R_2) < ... form the partial sums of i.i.d. exponential
variables with mean 1/B(theta), so A(R_i) is gamma distributed with shape i.
That identity gives an O(m) direct simulator for the first m records,
:func:`sample_records_direct`, which is the preferred generator for
record-based experiments. The literal approach, drawing base observations
until m records have occurred, is kept as :func:`sample_records_sequential`
for cross-checking; its waiting time is heavy tailed (the index of the m-th
record has infinite mean already at m = 2), so it runs under a hard cap on
base draws and raises :class:`~recordmle.errors.RecordCapError` beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from . import family as fam
from ._streams import as_generator
from .errors import ArgumentError, RecordCapError

__all__ = [
    "Provenance",
    "Sample",
    "RecordSequence",
    "extract_upper_records",
    "sample_iid",
    "sample_records_direct",
    "sample_records_sequential",
    "serialize_csv",
    "parse_csv_values",
]

_SEQUENTIAL_CAP = 10_000_000
_FIRST_CHUNK = 256


@dataclass(frozen=True, slots=True)
class Provenance:
    """Where a sample came from: observed data or a seeded simulation."""

    kind: str  # "observed" or "simulated"
    seed: Optional[int] = None
    stream: Optional[int] = None


@dataclass(frozen=True, slots=True)
class Sample:
    """An i.i.d. sample of base observations."""

    values: tuple[float, ...]
    provenance: Provenance = Provenance("observed")

    def __post_init__(self):
        if len(self.values) == 0:
            raise ArgumentError("Sample: empty value list")
        if any(math.isnan(v) for v in self.values):
            raise ArgumentError("Sample: NaN observation")

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True, slots=True)
class RecordSequence:
    """Upper record values R_1 < ... < R_m with base-sequence positions.

    ``indices`` holds the 0-based positions of the records in the base
    sequence; extraction always yields ``indices[0] == 0``. Synthetic
    sequences from the direct simulator use positions 0..m-1.
    """

    values: tuple[float, ...]
    indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ArgumentError("RecordSequence: empty")
        if len(self.values) != len(self.indices):
            raise ArgumentError("RecordSequence: values/indices length mismatch")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ArgumentError("RecordSequence: values must strictly increase")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ArgumentError("RecordSequence: indices must strictly increase")

    @property
    def m(self) -> int:
        return len(self.values)


def extract_upper_records(xs: Union[Sample, Iterable[float]]) -> RecordSequence:
    """Extract the upper records of a sequence.

    Ties are not records: a value equal to the running maximum is skipped,
    matching the convention for continuous parents where ties have
    probability zero. Equals the brute-force definition
    ``xs[i] > max(xs[0..i-1])`` entry for entry.
    """
    values = xs.values if isinstance(xs, Sample) else tuple(xs)
    if len(values) == 0:
        raise ArgumentError("extract_upper_records: empty input")
    arr = np.asarray(values, dtype=float)
    if np.isnan(arr).any():
        raise ArgumentError("extract_upper_records: NaN in input")
    cummax = np.maximum.accumulate(arr)
    prior = np.concatenate(([-math.inf], cummax[:-1]))
    mask = arr > prior
    idx = np.nonzero(mask)[0]
    return RecordSequence(
        values=tuple(float(v) for v in arr[idx]),
        indices=tuple(int(i) for i in idx),
    )


def sample_iid(spec: fam.FamilySpec, theta: float, n: int, rng_stream) -> Sample:
    """Draw an i.i.d. sample of size n by inverse-CDF transform.

    ``rng_stream`` is a ``(seed, stream)`` pair, a bare integer seed, or an
    existing generator; output is deterministic given the pair.
    """
    if n < 1:
        raise ArgumentError("sample_iid: n must be at least 1")
    gen = as_generator(rng_stream)
    u = gen.random(int(n))
    x = np.asarray(fam.quantile(spec, theta, u), dtype=float)
    return Sample(values=tuple(float(v) for v in x), provenance=_provenance(rng_stream))


def sample_records_direct(
    spec: fam.FamilySpec, theta: float, m: int, rng_stream
) -> RecordSequence:
    """Simulate the first m upper records in O(m) draws.

    Builds the partial sums S_i of i.i.d. exponentials with mean
    1/B(theta) and maps them back through A_inv; the S_i are exactly the
    transformed record values, so no base observations are needed.
    Positions are synthetic (0..m-1).
    """
    if m < 1:
        raise ArgumentError("sample_records_direct: m must be at least 1")
    gen = as_generator(rng_stream)
    b_val = float(spec.B(float(theta)))
    e = -np.log1p(-gen.random(int(m))) / b_val
    s = np.cumsum(e)
    r = np.asarray(fam.a_inverse(spec, s), dtype=float)
    return RecordSequence(
        values=tuple(float(v) for v in r), indices=tuple(range(int(m)))
    )


def sample_records_sequential(
    spec: fam.FamilySpec,
    theta: float,
    m: int,
    rng_stream,
    max_draws: int = _SEQUENTIAL_CAP,
) -> RecordSequence:
    """Simulate m upper records by drawing base observations until they occur.

    Draws are consumed in growing chunks (starting at 256, doubling) so the
    layout is deterministic given the stream. Raises
    :class:`~recordmle.errors.RecordCapError` if ``max_draws`` base draws do
    not contain m records. Returned positions are the true base-sequence
    indices.
    """
    if m < 1:
        raise ArgumentError("sample_records_sequential: m must be at least 1")
    gen = as_generator(rng_stream)
    values: list[float] = []
    indices: list[int] = []
    cur_max = -math.inf
    offset = 0
    chunk = _FIRST_CHUNK
    while len(values) < m:
        if offset >= max_draws:
            raise RecordCapError(
                f"{m} records not reached within {max_draws} base draws "
                f"({len(values)} found)"
            )
        size = min(chunk, max_draws - offset)
        u = gen.random(size)
        x = np.asarray(fam.quantile(spec, theta, u), dtype=float)
        cummax = np.maximum.accumulate(x)
        prior = np.maximum(np.concatenate(([-math.inf], cummax[:-1])), cur_max)
        hits = np.nonzero(x > prior)[0]
        for j in hits[: m - len(values)]:
            values.append(float(x[j]))
            indices.append(offset + int(j))
        cur_max = max(cur_max, float(cummax[-1]))
        offset += size
        chunk = min(chunk * 2, 1 << 20)
    return RecordSequence(values=tuple(values), indices=tuple(indices))


def _provenance(rng_stream) -> Provenance:
    if isinstance(rng_stream, (int, np.integer)):
        return Provenance("simulated", int(rng_stream), 0)
    if isinstance(rng_stream, tuple) and len(rng_stream) == 2:
        return Provenance("simulated", int(rng_stream[0]), int(rng_stream[1]))
    return Provenance("simulated")


# ---------------------------------------------------------------------------
# CSV interchange: header `index,value`, UTF-8, LF, shortest round-trip
# decimals (repr of a Python float is the shortest string that round-trips).


def serialize_csv(obj: Union[Sample, RecordSequence]) -> str:
    """Serialize a sample or record sequence to CSV text."""
    if isinstance(obj, RecordSequence):
        pairs = zip(obj.indices, obj.values)
    else:
        pairs = enumerate(obj.values)
    lines = ["index,value"]
    lines.extend(f"{i},{v!r}" for i, v in pairs)
    return "\n".join(lines) + "\n"


def parse_csv_values(text: str) -> list[float]:
    """Read the ``value`` column from CSV text with a header row."""
    lines = [ln for ln in text.split("\n") if ln.strip() != ""]
    if not lines:
        raise ArgumentError("CSV input is empty")
    header = [h.strip() for h in lines[0].split(",")]
    if "value" not in header:
        raise ArgumentError(f"CSV header {lines[0]!r} has no 'value' column")
    col = header.index("value")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        try:
            out.append(float(parts[col]))
        except (IndexError, ValueError):
            raise ArgumentError(f"malformed CSV row {ln!r}") from None
    if not out:
        raise ArgumentError("CSV input has no data rows")
    return out
