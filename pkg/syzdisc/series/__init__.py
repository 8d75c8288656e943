from syzdisc.series.kernel import (
    UV,
    TruncatedSeries,
    Truncation,
    VariableSpec,
    arithmetic,
    clip,
    derivative,
    embed,
    exp_series,
    extract,
    integrate,
    invert,
    log_series,
    relabel,
    restrict,
    substitute,
)
from syzdisc.series.text import SeriesDocument, format_rational, to_canonical_text, to_expression

__all__ = [
    "UV",
    "SeriesDocument",
    "TruncatedSeries",
    "Truncation",
    "VariableSpec",
    "arithmetic",
    "clip",
    "derivative",
    "embed",
    "exp_series",
    "extract",
    "format_rational",
    "integrate",
    "invert",
    "log_series",
    "relabel",
    "restrict",
    "substitute",
    "to_canonical_text",
    "to_expression",
]
