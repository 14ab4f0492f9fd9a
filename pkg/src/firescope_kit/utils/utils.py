# utils/utils.py
import hashlib
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Mapping, Union

from firescope_kit.errors import EmptyInputError


def fsum_mean(values: Iterable[float], field: str = "values") -> float:
    """Correctly rounded mean; independent of the order of ``values``."""
    items = [float(v) for v in values]
    if not items:
        raise EmptyInputError("cannot average an empty sequence", field=field)
    return math.fsum(items) / len(items)


def ordered_mean(scores: Mapping[str, float], field: str = "scores") -> float:
    """Mean of keyed scores, reduced in ascending key order."""
    return fsum_mean((scores[k] for k in sorted(scores)), field=field)


def canonical_json(data: Any) -> str:
    """Sorted-key, whitespace-free JSON used for hashing and headers."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def atomic_write(path: Union[str, Path], data: Union[str, bytes]) -> Path:
    """Write to a temp file next to ``path`` and rename it into place.

    Readers never observe a partially written file.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as sink:
            sink.write(payload)
            sink.flush()
            os.fsync(sink.fileno())
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return target
