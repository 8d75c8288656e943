from fractions import Fraction

from pydantic import BaseModel, Field

from syzdisc.series.kernel import TruncatedSeries, VariableSpec


def format_rational(value: Fraction) -> str:
    """Canonical ``num/den`` form, denominator always printed."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def to_canonical_text(series: TruncatedSeries) -> str:
    """One term per line, ``num/den  e1 e2 ... ek``, lines sorted by exponent vector."""
    lines = [f"{format_rational(c)}  {' '.join(str(x) for x in e)}" for e, c in series.sorted_terms()]
    return "\n".join(lines) + ("\n" if lines else "")


def _monomial(names: tuple[str, ...], e: tuple[int, ...]) -> str:
    parts = []
    for name, x in zip(names, e):
        if x == 1:
            parts.append(name)
        elif x:
            parts.append(f"{name}^{x}")
    return "*".join(parts)


def to_expression(series: TruncatedSeries) -> str:
    """Human-readable sum, used by ``repr`` and log lines."""
    if series.is_zero():
        return "0"
    out = []
    for e, c in series.sorted_terms():
        mono = _monomial(series.spec.names, e)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        out.append(f"{sign} {body}")
    text = " ".join(out)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


class SeriesDocument(BaseModel):
    """JSON rendering of a series: variables in spec order and canonical terms."""

    small: list[str] = Field(description="Small variable names")
    phase: list[str] = Field(description="Phase variable names")
    terms: list[tuple[str, list[int]]] = Field(description="(num/den, exponent vector) in canonical order")

    @classmethod
    def from_series(cls, series: TruncatedSeries) -> "SeriesDocument":
        return cls(
            small=list(series.spec.small_names),
            phase=list(series.spec.phase_names),
            terms=[(format_rational(c), list(e)) for e, c in series.sorted_terms()],
        )

    def spec(self) -> VariableSpec:
        return VariableSpec(small_names=tuple(self.small), phase_names=tuple(self.phase))
