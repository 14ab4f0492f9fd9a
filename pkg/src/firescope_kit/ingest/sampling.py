# ingest/sampling.py
"""
Stratified split assignment and the event / control quotas of the benchmark.

Responsibilities:
  • Derive strata from tile centroids (geographic cells) and mean risk.
  • Round split targets across strata jointly, so no stratum strays more
    than one tile from the global split proportions.
  • Assign ids to splits with a seeded shuffle inside every stratum.
  • Filter small wildfire events and cap events / controls per country.

Determinism: strata are always visited in sorted key order and every random
draw comes from one ``numpy`` generator seeded by the caller.
"""
from __future__ import annotations

import logging
import math
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from firescope_kit.constants import DEFAULT_CELL_DEG, DEFAULT_PIXEL_SIZE_M, MIN_EVENT_AREA_KM2, ORDINAL_LEVELS
from firescope_kit.errors import EmptyInputError, ValidationError
from firescope_kit.raster import BinaryMask

K = TypeVar("K", bound=Hashable)
Stratum = Tuple[str, int]


class SplitCandidate(BaseModel):
    """One tile eligible for sampling."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="tile identifier")
    cell: str = Field(..., description="geographic cell id (see geo_cell)")
    risk_bin: int = Field(..., ge=0, lt=ORDINAL_LEVELS, description="ordinal risk bin 0..9")

    @property
    def stratum(self) -> Stratum:
        return self.cell, self.risk_bin


class SplitSpec(BaseModel):
    """How many tiles each split receives and the seed of the shuffle."""

    model_config = ConfigDict(frozen=True)

    target_counts: Dict[str, int] = Field(
        default_factory=lambda: {"train": 1000, "val": 100, "test": 100},
        description="tiles per split, allocated in insertion order",
    )
    seed: int = Field(0, ge=0, lt=2**64, description="64-bit shuffle seed")
    strata: Optional[List[Stratum]] = Field(
        None, description="allowed (cell, risk_bin) strata; None accepts any"
    )

    @field_validator("target_counts")
    @classmethod
    def _non_negative(cls, v: Dict[str, int]) -> Dict[str, int]:
        if not v:
            raise ValueError("at least one split is required")
        if any(c < 0 for c in v.values()):
            raise ValueError("split counts must be non-negative")
        return v


def geo_cell(lat: float, lon: float, cell_deg: float = DEFAULT_CELL_DEG) -> str:
    """Id of the ``cell_deg`` x ``cell_deg`` lat/lon cell containing a centroid."""
    if not -90.0 <= lat <= 90.0:
        raise ValidationError(f"latitude {lat} outside [-90, 90]", field="lat")
    if not -180.0 <= lon <= 180.0:
        raise ValidationError(f"longitude {lon} outside [-180, 180]", field="lon")
    if cell_deg <= 0:
        raise ValidationError("cell size must be positive", field="cell_deg")
    rows = math.ceil(180.0 / cell_deg)
    cols = math.ceil(360.0 / cell_deg)
    row = min(int((lat + 90.0) // cell_deg), rows - 1)
    col = min(int((lon + 180.0) // cell_deg), cols - 1)
    return f"{row}:{col}"


def risk_bin(mean_risk: float) -> int:
    """Ordinal bin of a mean risk value in [0, 1]."""
    if not 0.0 <= mean_risk <= 1.0:
        raise ValidationError(f"mean risk {mean_risk} outside [0, 1]", field="mean_risk")
    return min(int(math.floor(mean_risk * ORDINAL_LEVELS)), ORDINAL_LEVELS - 1)


def build_candidates(
    records: Sequence[Mapping[str, object]],
    cell_deg: float = DEFAULT_CELL_DEG,
) -> List[SplitCandidate]:
    """SplitCandidates from ``{id, lat, lon, mean_risk}`` or ``{id, cell, risk_bin}`` records."""
    out = []
    for n, rec in enumerate(records):
        if "id" not in rec:
            raise ValidationError(f"record {n} lacks id", field="candidates")
        if "cell" in rec and "risk_bin" in rec:
            out.append(SplitCandidate(id=str(rec["id"]), cell=str(rec["cell"]), risk_bin=int(rec["risk_bin"])))
            continue
        missing = [k for k in ("lat", "lon", "mean_risk") if k not in rec]
        if missing:
            raise ValidationError(f"record {n} lacks {', '.join(missing)}", field="candidates")
        out.append(
            SplitCandidate(
                id=str(rec["id"]),
                cell=geo_cell(float(rec["lat"]), float(rec["lon"]), cell_deg),
                risk_bin=risk_bin(float(rec["mean_risk"])),
            )
        )
    return out


def allocate_proportional(
    weights: Mapping[K, float],
    total: int,
    caps: Optional[Mapping[K, int]] = None,
) -> Dict[K, int]:
    """Split ``total`` across keys proportionally to ``weights`` (largest remainder).

    Remainder ties go to the smaller key. ``caps`` bounds each key's share;
    capped surplus flows to the next keys in remainder order.
    """
    if total < 0:
        raise ValidationError("total must be non-negative", field="total")
    keys = sorted(weights)
    if not keys:
        raise EmptyInputError("no keys to allocate over", field="weights")
    if any(weights[k] < 0 for k in keys):
        raise ValidationError("weights must be non-negative", field="weights")
    limit = {k: (caps[k] if caps is not None else total) for k in keys}
    if total > sum(limit.values()):
        raise ValidationError(f"cannot place {total} items in capacity {sum(limit.values())}", field="total")
    weight_sum = math.fsum(weights[k] for k in keys)
    if weight_sum == 0:
        raise ValidationError("weights sum to zero", field="weights")

    exact = {k: total * weights[k] / weight_sum for k in keys}
    alloc = {k: min(int(math.floor(exact[k])), limit[k]) for k in keys}
    remaining = total - sum(alloc.values())
    rank = {k: i for i, k in enumerate(keys)}
    order = sorted(keys, key=lambda k: (-(exact[k] - math.floor(exact[k])), rank[k]))
    while remaining > 0:
        for k in order:
            if remaining == 0:
                break
            if alloc[k] < limit[k]:
                alloc[k] += 1
                remaining -= 1
    return alloc


def _split_quotas(sizes: Mapping[Stratum, int], counts: Mapping[str, int]) -> Dict[str, Dict[Stratum, int]]:
    """Per-stratum quota of every split, rounded jointly.

    Each cell is the floor or the ceiling of ``size * count / n``, every split
    gets exactly its count and no stratum hands out more than the ceiling of
    its proportional share of all requested tiles. Remainders are placed by
    largest remainder first; if that greedy pass gets stuck, a maximum flow
    over the fractional cells places them instead.
    """
    strata = sorted(sizes)
    splits = list(counts)
    n = sum(sizes.values())
    requested = sum(counts.values())

    def base() -> Tuple[Dict[str, Dict[Stratum, int]], Dict[str, int], Dict[Stratum, int]]:
        quota = {j: {s: sizes[s] * counts[j] // n for s in strata} for j in splits}
        deficit = {j: counts[j] - sum(quota[j].values()) for j in splits}
        room = {s: -(-sizes[s] * requested // n) - sum(quota[j][s] for j in splits) for s in strata}
        return quota, deficit, room

    quota, deficit, room = base()
    cells = sorted(
        ((sizes[s] * counts[j] % n, i, s, j) for i, j in enumerate(splits) for s in strata if sizes[s] * counts[j] % n),
        key=lambda c: (-c[0], c[1], c[2]),
    )
    for _, _, s, j in cells:
        if deficit[j] > 0 and room[s] > 0:
            quota[j][s] += 1
            deficit[j] -= 1
            room[s] -= 1
    if not any(deficit.values()):
        return quota

    logging.debug("Largest-remainder rounding stalled; placing remainders by maximum flow")
    quota, deficit, room = base()
    n_splits, n_strata = len(splits), len(strata)
    sink = n_splits + n_strata + 1
    edges: List[Tuple[int, int, int]] = []
    for i, j in enumerate(splits):
        edges.append((0, 1 + i, deficit[j]))
        edges.extend(
            (1 + i, 1 + n_splits + k, 1) for k, s in enumerate(strata) if sizes[s] * counts[j] % n
        )
    edges.extend((1 + n_splits + k, sink, room[s]) for k, s in enumerate(strata))
    rows, cols, caps = zip(*edges)
    graph = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(sink + 1, sink + 1))
    graph.eliminate_zeros()
    result = maximum_flow(graph, 0, sink)
    if result.flow_value < sum(deficit.values()):
        raise ValidationError("split counts cannot be rounded within strata", field="target_counts")
    flow = result.flow[1:1 + n_splits, 1 + n_splits:1 + n_splits + n_strata].toarray()
    for i, j in enumerate(splits):
        for k, s in enumerate(strata):
            quota[j][s] += int(flow[i, k])
    return quota


def stratified_split(
    candidates: Sequence[SplitCandidate | Tuple[str, str, int]],
    spec: SplitSpec,
) -> Dict[str, str]:
    """Assign candidate ids to splits, proportionally within every stratum.

    Returns ``{id: split}`` for the assigned candidates only; candidates beyond
    the requested totals stay unassigned.
    """
    if not candidates:
        raise EmptyInputError("no candidates to split", field="candidates")
    items = [c if isinstance(c, SplitCandidate) else SplitCandidate(id=c[0], cell=c[1], risk_bin=c[2]) for c in candidates]

    allowed = set(map(tuple, spec.strata)) if spec.strata is not None else None
    groups: Dict[Stratum, List[str]] = {}
    seen = set()
    for cand in items:
        if cand.id in seen:
            raise ValidationError(f"duplicate candidate id {cand.id!r}", field="candidates")
        seen.add(cand.id)
        if allowed is not None and cand.stratum not in allowed:
            raise ValidationError(f"candidate {cand.id!r} has unknown stratum {cand.stratum}", field="candidates")
        groups.setdefault(cand.stratum, []).append(cand.id)

    requested = sum(spec.target_counts.values())
    if requested > len(items):
        raise ValidationError(
            f"requested {requested} tiles but only {len(items)} candidates", field="target_counts"
        )

    sizes = {k: len(v) for k, v in groups.items()}
    quotas = _split_quotas(sizes, spec.target_counts)

    rng = np.random.default_rng(spec.seed)
    assignment: Dict[str, str] = {}
    for stratum in sorted(groups):
        ids = sorted(groups[stratum])
        shuffled = [ids[i] for i in rng.permutation(len(ids))]
        start = 0
        for split in spec.target_counts:
            take = quotas[split][stratum]
            for tile_id in shuffled[start:start + take]:
                assignment[tile_id] = split
            start += take
    logging.info(
        "Stratified %d of %d candidates over %d strata", len(assignment), len(items), len(groups)
    )
    return assignment


def event_area_km2(mask: BinaryMask, pixel_size_m: float = DEFAULT_PIXEL_SIZE_M) -> float:
    """Burnt area of a wildfire mask in square kilometres."""
    return float(mask.bits.sum()) * pixel_size_m * pixel_size_m / 1e6


def filter_events_by_area(
    areas_km2: Mapping[str, float],
    min_area_km2: float = MIN_EVENT_AREA_KM2,
) -> List[str]:
    """Ids of events whose burnt area is at least ``min_area_km2``, sorted."""
    kept = sorted(k for k, a in areas_km2.items() if a >= min_area_km2)
    dropped = len(areas_km2) - len(kept)
    if dropped:
        logging.info("Dropped %d events smaller than %.1f km2", dropped, min_area_km2)
    return kept


def limit_events_by_country(
    event_country: Mapping[str, str],
    country_areas_km2: Mapping[str, float],
    total: int,
    seed: int,
) -> List[str]:
    """Keep at most ``total`` events, capped per country in proportion to its area.

    Countries with fewer events than their share pass their surplus on to the
    others. Returns the kept ids sorted.
    """
    by_country: Dict[str, List[str]] = {}
    for event_id, country in event_country.items():
        if country not in country_areas_km2:
            raise ValidationError(f"no area known for country {country!r}", field="country_areas_km2")
        by_country.setdefault(country, []).append(event_id)
    areas = {c: country_areas_km2[c] for c in by_country}
    available = {c: len(ids) for c, ids in by_country.items()}
    quota = allocate_proportional(areas, min(total, len(event_country)), caps=available)

    rng = np.random.default_rng(seed)
    kept: List[str] = []
    for country in sorted(by_country):
        ids = sorted(by_country[country])
        kept.extend(ids[i] for i in rng.permutation(len(ids))[: quota[country]])
    return sorted(kept)


def allocate_controls(event_counts: Mapping[str, int], total: int) -> Dict[str, int]:
    """Control locations per country, proportional to its wildfire event count."""
    return allocate_proportional({c: float(n) for c, n in event_counts.items()}, total)
