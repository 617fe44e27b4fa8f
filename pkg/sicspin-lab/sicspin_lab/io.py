"""
Output files: CSV for spectra and traces, JSON for reports.

All writers are deterministic: fixed column order, fixed float format,
sorted JSON keys and ``\\n`` line endings.
"""

import json
import logging
import os
import re
from enum import Enum
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from sicspin_charge.registry import DefectRegistry
from sicspin_core.exceptions import ParameterError, SchemaError
from sicspin_core.models import Channel, RabiTrace, Spectrum

logger = logging.getLogger(__name__)

SPECTRUM_COLUMNS = ("freq_mhz", "signal")
TRACE_COLUMNS = ("time_us", "signal")
FLOAT_FORMAT = "%.10g"


def write_table_csv(path: str, columns: Dict[str, Sequence[float]]) -> str:
    pd.DataFrame({name: np.asarray(values, dtype=float) for name, values in columns.items()}).to_csv(
        path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    logger.debug(f"Wrote {path}")
    return path


def write_spectrum_csv(path: str, spectrum: Spectrum) -> str:
    return write_table_csv(path, dict(zip(SPECTRUM_COLUMNS, (spectrum.frequencies, spectrum.signal))))


def write_trace_csv(path: str, trace: RabiTrace) -> str:
    return write_table_csv(path, dict(zip(TRACE_COLUMNS, (trace.times, trace.signal))))


def _line_number(message: str) -> Optional[int]:
    match = re.search(r"line (\d+)", message)
    return int(match.group(1)) if match else None


def read_trace_csv(path: str, channel: Channel = Channel.PDMR) -> RabiTrace:
    """
    Reads a ``time_us,signal`` CSV. Rows are file lines, the header is
    row 1; any deviation is a SchemaError naming the row and column.
    """
    if not os.path.isfile(path):
        raise SchemaError(f"Trace file not found: {path}")
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path} is empty", row=1) from None
    except pd.errors.ParserError as e:
        raise SchemaError(f"Malformed CSV {path}: {e}", row=_line_number(str(e))) from None

    header = [str(c).strip() for c in df.columns]
    if header != list(TRACE_COLUMNS):
        raise SchemaError(f"Expected header '{','.join(TRACE_COLUMNS)}' in {path}, got '{','.join(header)}'", row=1)
    if len(df) == 0:
        raise SchemaError(f"{path} has no data rows", row=2)

    values = {}
    for column in TRACE_COLUMNS:
        parsed = pd.to_numeric(df[column], errors="coerce").to_numpy(dtype=float)
        bad = np.flatnonzero(~np.isfinite(parsed))
        if len(bad):
            raw = df[column].iloc[bad[0]]
            raise SchemaError(f"Not a finite number: '{raw}' in {path}", row=int(bad[0]) + 2, column=column)
        values[column] = parsed

    try:
        trace = RabiTrace(
            values["time_us"],
            values["signal"],
            channel,
            metadata={"source": os.path.basename(path)},
        )
    except ParameterError as e:
        raise SchemaError(f"Invalid trace in {path}: {e}", column="time_us") from e
    logger.info(f"Read {len(trace)} points from {path}")
    return trace


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Enum):
        return obj.value
    if hasattr(obj, "to_json_dict"):
        return obj.to_json_dict()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def write_json(path: str, report: Dict[str, Any], registry: Optional[DefectRegistry] = None) -> str:
    """Writes a report, stamped with the registry's provenance flags when given."""
    document = dict(report)
    if registry is not None:
        document["provenance"] = registry.provenance()
    with open(path, "w", newline="\n") as f:
        json.dump(document, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def write_registry_json(path: str, registry: DefectRegistry) -> str:
    with open(path, "w", newline="\n") as f:
        json.dump(registry.to_json_list(), f, indent=2, sort_keys=True)
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path
