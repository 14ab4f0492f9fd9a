"""Dataset curation: tiling, supertile crops, stratified sampling, climatology."""
from firescope_kit.ingest.climate import ClimateVector, build_climate_vector, load_climate_vector
from firescope_kit.ingest.sampling import (
    SplitCandidate,
    SplitSpec,
    allocate_controls,
    allocate_proportional,
    build_candidates,
    event_area_km2,
    filter_events_by_area,
    geo_cell,
    limit_events_by_country,
    risk_bin,
    stratified_split,
)
from firescope_kit.ingest.tiling import (
    TileGeometry,
    assemble_supertile,
    crop_from_supertile,
    group_supertiles,
    sample_crop_offsets,
    tile_raster,
)

__all__ = [
    "ClimateVector",
    "build_climate_vector",
    "load_climate_vector",
    "SplitCandidate",
    "SplitSpec",
    "allocate_controls",
    "build_candidates",
    "allocate_proportional",
    "event_area_km2",
    "filter_events_by_area",
    "geo_cell",
    "limit_events_by_country",
    "risk_bin",
    "stratified_split",
    "TileGeometry",
    "assemble_supertile",
    "crop_from_supertile",
    "group_supertiles",
    "sample_crop_offsets",
    "tile_raster",
]
