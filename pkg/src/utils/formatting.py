"""Emitters for CLI output.

Machine formats (json, csv) always carry rationals as 'num/den'; the
table format adds 6-digit decimals next to them for reading.
"""
import json
from fractions import Fraction
from typing import Any, Iterable, List, Mapping, Optional

import mpmath
import pandas as pd
from pydantic import BaseModel

from src.core.weights import WeightPMF
from src.utils.errors import DomainError
from src.utils.rationals import format_rational

FORMATS = ("json", "csv", "table")


def render_rational(value) -> str:
    return format_rational(value)


def render_decimal(value, digits: int = 6) -> str:
    if isinstance(value, (int, Fraction)):
        return f"{float(value):.{digits}f}"
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, digits, min_fixed=-4, max_fixed=4)
    return f"{float(value):.{digits}f}"


def pmf_frame(pmf: WeightPMF, decimals: bool = False) -> pd.DataFrame:
    rows = []
    for w, p in pmf.items:
        row = {"w": w, "p": render_rational(p)}
        if decimals:
            row["p_decimal"] = render_decimal(p)
        rows.append(row)
    return pd.DataFrame(rows, columns=["w", "p", "p_decimal"] if decimals else ["w", "p"])


def records_frame(rows: Iterable[Mapping[str, Any]]) -> pd.DataFrame:
    rows = list(rows)
    return pd.DataFrame(rows, columns=list(rows[0].keys()) if rows else None)


def _jsonable(payload):
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, pd.DataFrame):
        return payload.to_dict(orient="records")
    if isinstance(payload, list):
        return [_jsonable(item) for item in payload]
    return payload


def render(payload, fmt: str, frame: Optional[pd.DataFrame] = None) -> str:
    """
    Render a payload in one of json, csv or table

    Args:
        payload: pydantic record, list of records, dict or DataFrame (json)
        fmt: Output format
        frame: Tabular view used for csv and table; defaults to the payload
            itself when it is a DataFrame
    """
    if fmt not in FORMATS:
        raise DomainError(f"format must be one of {FORMATS}, got {fmt!r}")
    if fmt == "json":
        return json.dumps(_jsonable(payload), indent=2)
    if frame is None:
        if isinstance(payload, pd.DataFrame):
            frame = payload
        else:
            data = _jsonable(payload)
            frame = records_frame(data if isinstance(data, list) else [data])
    if fmt == "csv":
        return frame.to_csv(index=False).rstrip("\n")
    return frame.to_string(index=False)


def decimal_columns(frame: pd.DataFrame, columns: List[str]) -> pd.DataFrame:
    """Copy of frame with a 6-digit decimal twin for each 'num/den' column"""
    out = frame.copy()
    for column in columns:
        out[f"{column}_decimal"] = [render_decimal(Fraction(v)) for v in frame[column]]
    return out
