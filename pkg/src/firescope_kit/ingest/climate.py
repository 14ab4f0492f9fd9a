# ingest/climate.py
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from firescope_kit.constants import CLIMATE_DIM, CLIMATE_MONTHS, CLIMATE_VARIABLES
from firescope_kit.errors import MissingClimateError

MonthlyRecords = Union[Mapping[int, Mapping[str, float]], Sequence[Mapping[str, float]]]


class ClimateVector(BaseModel):
    """Monthly climatology at a tile centroid, variable-major.

    ``values[v * 12 + (month - 1)]`` holds variable ``CLIMATE_VARIABLES[v]``
    for ``month`` (1..12).
    """

    model_config = ConfigDict(frozen=True)

    values: List[float] = Field(..., description="60 finite reals, 5 variables x 12 months")

    @field_validator("values")
    @classmethod
    def _check_values(cls, v: List[float]) -> List[float]:
        if len(v) != CLIMATE_DIM:
            raise ValueError(f"expected {CLIMATE_DIM} values, got {len(v)}")
        if not all(math.isfinite(x) for x in v):
            raise ValueError("climate values must be finite")
        wind = CLIMATE_VARIABLES.index("wind_direction") * CLIMATE_MONTHS
        if not all(0.0 <= x < 360.0 for x in v[wind:wind + CLIMATE_MONTHS]):
            raise ValueError("wind direction must lie in [0, 360)")
        return v

    def variable(self, name: str) -> List[float]:
        """The 12 monthly values of one variable."""
        start = CLIMATE_VARIABLES.index(name) * CLIMATE_MONTHS
        return self.values[start:start + CLIMATE_MONTHS]


def build_climate_vector(monthly: MonthlyRecords) -> ClimateVector:
    """Flatten 12 monthly records of the 5 climate variables into a ClimateVector.

    ``monthly`` is either a mapping keyed by month number (1..12) or a
    sequence of 12 records in calendar order. Wind direction is wrapped into
    [0, 360).
    """
    records: Dict[int, Mapping[str, Any]]
    if isinstance(monthly, Mapping):
        records = {int(m): rec for m, rec in monthly.items()}
    else:
        records = {i + 1: rec for i, rec in enumerate(monthly)}

    values: List[float] = []
    for name in CLIMATE_VARIABLES:
        for month in range(1, CLIMATE_MONTHS + 1):
            if month not in records:
                raise MissingClimateError(f"month {month} is missing", month=month)
            rec = records[month]
            if name not in rec or rec[name] is None:
                raise MissingClimateError(f"{name} missing for month {month}", month=month, variable=name)
            value = float(rec[name])
            if not math.isfinite(value):
                raise MissingClimateError(f"{name} is not finite for month {month}", month=month, variable=name)
            if name == "wind_direction":
                value = value % 360.0
                if value == 360.0:  # tiny negatives round up
                    value = 0.0
            values.append(value)
    return ClimateVector(values=values)


def load_climate_vector(path: Union[str, Path]) -> ClimateVector:
    """Read a JSON climatology record: a list of 12 monthly objects or an object keyed by month."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, (list, dict)):
        raise MissingClimateError(f"{path} holds neither a list nor an object of monthly records")
    return build_climate_vector(data)
