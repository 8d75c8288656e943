"""Exact sparse truncated power/Laurent series over the rationals.

Variables come in two kinds. *Small* variables (Kähler parameters and the
product variable ``uv``) carry nonnegative exponents and are truncated by
total degree. *Phase* variables (the ``z_j``) are Laurent and truncated in an
exponent window.

Retention rule, with ``s`` the total small degree, ``Q = small_total_max``,
``W = z_window`` and ``c = phase_slope``::

    s <= Q, per-small caps, group caps on named sets of small variables,
    -(W + c*Q) <= e_j <= W + c*(Q - s)   for every phase exponent e_j

Every series the pipeline builds lives in the monoid ``e_j >= -c*s``. On that
monoid the dropped monomials form an upper set, so the ring operations below
are exact on everything retained, and in particular on the displayed window
``|e_j| <= W`` that :func:`clip` cuts out.
"""

from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from toolz import memoize

from syzdisc.errors import AdmissibilityError, SeriesError, SpecMismatchError, UnknownVariableError

UV = "uv"

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]


class VariableSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    small_names: tuple[str, ...] = Field(default=(), description="Kähler parameters and the product variable uv")
    phase_names: tuple[str, ...] = Field(default=(), description="Laurent (holonomy) variables z_j")

    @model_validator(mode="after")
    def _check_names(self) -> "VariableSpec":
        names = self.small_names + self.phase_names
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be unique, got {names}")
        if UV in self.phase_names:
            raise ValueError("uv must be declared as a small variable")
        return self

    @property
    def names(self) -> tuple[str, ...]:
        return self.small_names + self.phase_names

    @property
    def n_small(self) -> int:
        return len(self.small_names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariableError(f"unknown variable {name!r}, spec has {self.names}") from None

    def is_small(self, name: str) -> bool:
        return name in self.small_names


class Truncation(BaseModel):
    model_config = ConfigDict(frozen=True)

    small_total_max: int = Field(ge=0, description="Cap on the total degree across all small variables")
    z_window: int = Field(default=0, ge=0, description="Displayed phase window W, |e_j| <= W")
    per_small_max: tuple[tuple[str, int], ...] = Field(default=(), description="Optional per-variable caps")
    group_max: tuple[tuple[tuple[str, ...], int], ...] = Field(default=(), description="Caps on the total degree of named groups of small variables")
    phase_slope: int = Field(default=1, ge=0, description="Extra phase room granted per unit of unused small degree")

    @field_validator("per_small_max", mode="before")
    @classmethod
    def _caps_as_pairs(cls, value):
        if isinstance(value, Mapping):
            value = value.items()
        return tuple(sorted((str(name), int(cap)) for name, cap in value))

    @field_validator("group_max", mode="before")
    @classmethod
    def _groups_as_pairs(cls, value):
        if isinstance(value, Mapping):
            value = value.items()
        return tuple((tuple(names), int(cap)) for names, cap in value)

    @field_validator("per_small_max")
    @classmethod
    def _caps_nonnegative(cls, value):
        for name, cap in value:
            if cap < 0:
                raise ValueError(f"cap for {name} must be >= 0")
        return value

    def cap(self, name: str) -> Optional[int]:
        return dict(self.per_small_max).get(name)

    def group_cap(self, names: Iterable[str]) -> Optional[int]:
        names = tuple(names)
        return next((cap for group, cap in self.group_max if group == names), None)


class _Layout:
    """Retention test for one (spec, truncation) pair."""

    __slots__ = ("caps", "groups", "lower", "n_small", "q_max", "slope", "window")

    def __init__(self, spec: VariableSpec, trunc: Truncation):
        self.n_small = spec.n_small
        self.q_max = trunc.small_total_max
        self.window = trunc.z_window
        self.slope = trunc.phase_slope
        self.caps = tuple((i, cap) for i, name in enumerate(spec.small_names) if (cap := trunc.cap(name)) is not None)
        self.groups = tuple(
            (idx, cap) for names, cap in trunc.group_max if (idx := tuple(i for i, name in enumerate(spec.small_names) if name in names))
        )
        self.lower = -(trunc.z_window + trunc.phase_slope * trunc.small_total_max)

    def degree(self, e: Exponents) -> int:
        return sum(e[: self.n_small])

    def retains(self, e: Exponents) -> bool:
        ns = self.n_small
        s = 0
        for x in e[:ns]:
            if x < 0:
                return False
            s += x
        if s > self.q_max:
            return False
        for i, cap in self.caps:
            if e[i] > cap:
                return False
        for idx, cap in self.groups:
            if sum(e[i] for i in idx) > cap:
                return False
        upper = self.window + self.slope * (self.q_max - s)
        return all(self.lower <= x <= upper for x in e[ns:])

    def admissible(self, e: Exponents) -> bool:
        """Tail monomials allowed in invert/exp/log: positive small degree, or a nonconstant z-power series term."""
        if any(e[: self.n_small]):
            return True
        phase = e[self.n_small :]
        return all(x >= 0 for x in phase) and any(x > 0 for x in phase)


@memoize
def _layout(spec: VariableSpec, trunc: Truncation) -> _Layout:
    return _Layout(spec, trunc)


class TruncatedSeries:
    """Immutable sparse series; ``terms`` maps exponent vectors (small first, then phase) to nonzero rationals."""

    __slots__ = ("_layout", "spec", "terms", "trunc")

    def __init__(self, spec: VariableSpec, trunc: Truncation, terms: Optional[Mapping[Exponents, Scalar]] = None):
        layout = _layout(spec, trunc)
        width = len(spec.names)
        clean: dict[Exponents, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != width:
                raise SeriesError(f"exponent vector {e} does not match variables {spec.names}")
            if any(x < 0 for x in e[: spec.n_small]):
                raise AdmissibilityError(f"negative small exponent in {e}")
            c = Fraction(c)
            if c and layout.retains(e):
                clean[e] = c
        self.spec = spec
        self.trunc = trunc
        self.terms = clean
        self._layout = layout

    @classmethod
    def _raw(cls, spec: VariableSpec, trunc: Truncation, terms: dict[Exponents, Fraction]) -> "TruncatedSeries":
        # caller guarantees retained, nonzero terms
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.trunc = trunc
        obj.terms = terms
        obj._layout = _layout(spec, trunc)
        return obj

    # constructors

    @classmethod
    def zero(cls, spec: VariableSpec, trunc: Truncation) -> "TruncatedSeries":
        return cls._raw(spec, trunc, {})

    @classmethod
    def constant(cls, spec: VariableSpec, trunc: Truncation, value: Scalar = 1) -> "TruncatedSeries":
        return cls(spec, trunc, {(0,) * len(spec.names): value})

    @classmethod
    def one(cls, spec: VariableSpec, trunc: Truncation) -> "TruncatedSeries":
        return cls.constant(spec, trunc, 1)

    @classmethod
    def monomial(cls, spec: VariableSpec, trunc: Truncation, exponents: Mapping[str, int], coefficient: Scalar = 1) -> "TruncatedSeries":
        e = [0] * len(spec.names)
        for name, x in exponents.items():
            e[spec.index(name)] = x
        return cls(spec, trunc, {tuple(e): coefficient})

    @classmethod
    def variable(cls, spec: VariableSpec, trunc: Truncation, name: str) -> "TruncatedSeries":
        return cls.monomial(spec, trunc, {name: 1})

    # inspection

    @property
    def zero_exponent(self) -> Exponents:
        return (0,) * len(self.spec.names)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.zero_exponent, Fraction(0))

    def coefficient(self, exponents: Mapping[str, int]) -> Fraction:
        e = [0] * len(self.spec.names)
        for name, x in exponents.items():
            e[self.spec.index(name)] = x
        return self.terms.get(tuple(e), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        return sorted(self.terms.items())

    def __iter__(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.spec, self.trunc, other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.spec == other.spec and self.trunc == other.trunc and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        from syzdisc.series.text import to_expression

        return f"TruncatedSeries({to_expression(self)})"

    # operators delegate to the module-level operations

    def _coerce(self, other: Union["TruncatedSeries", Scalar]) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(self.spec, self.trunc, other)

    def __add__(self, other):
        return arithmetic(self, self._coerce(other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return arithmetic(self, self._coerce(other), "sub")

    def __rsub__(self, other):
        return arithmetic(self._coerce(other), self, "sub")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return arithmetic(self, other, "mul")

    __rmul__ = __mul__

    def __neg__(self):
        return arithmetic(self, self, "neg")

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return self * invert(other)

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        result = TruncatedSeries.one(self.spec, self.trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, factor: Scalar) -> "TruncatedSeries":
        factor = Fraction(factor)
        if not factor:
            return TruncatedSeries.zero(self.spec, self.trunc)
        return TruncatedSeries._raw(self.spec, self.trunc, {e: c * factor for e, c in self.terms.items()})

    def shift(self, exponents: Exponents) -> "TruncatedSeries":
        """Multiply by the unit monomial with the given exponent vector."""
        return TruncatedSeries(self.spec, self.trunc, {tuple(x + y for x, y in zip(e, exponents)): c for e, c in self.terms.items()})


def _check_compatible(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.spec is b.spec and a.trunc is b.trunc:
        return
    if a.spec != b.spec:
        raise SpecMismatchError(f"variable specs differ: {a.spec.names} vs {b.spec.names}")
    if a.trunc != b.trunc:
        raise SpecMismatchError(f"truncations differ: {a.trunc} vs {b.trunc}")


def _multiply(a: TruncatedSeries, b: TruncatedSeries) -> dict[Exponents, Fraction]:
    layout = a._layout
    if not a.terms or not b.terms:
        return {}
    # bucket b by small degree so pairs past the total cap are skipped wholesale
    buckets: dict[int, list[tuple[Exponents, Fraction]]] = {}
    for e, c in b.terms.items():
        buckets.setdefault(layout.degree(e), []).append((e, c))
    degrees = sorted(buckets)
    out: dict[Exponents, Fraction] = {}
    retains = layout.retains
    for ea, ca in a.terms.items():
        room = layout.q_max - layout.degree(ea)
        for d in degrees:
            if d > room:
                break
            for eb, cb in buckets[d]:
                e = tuple(x + y for x, y in zip(ea, eb))
                if retains(e):
                    out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def arithmetic(a: TruncatedSeries, b: TruncatedSeries, op: Literal["add", "sub", "mul", "neg"]) -> TruncatedSeries:
    """Exact ring operation followed by truncation; ``neg`` ignores ``b``."""
    if op == "neg":
        return TruncatedSeries._raw(a.spec, a.trunc, {e: -c for e, c in a.terms.items()})
    _check_compatible(a, b)
    if op == "mul":
        return TruncatedSeries._raw(a.spec, a.trunc, _multiply(a, b))
    if op not in ("add", "sub"):
        raise SeriesError(f"unknown operation {op!r}")
    sign = 1 if op == "add" else -1
    out = dict(a.terms)
    for e, c in b.terms.items():
        total = out.get(e, 0) + sign * c
        if total:
            out[e] = total
        else:
            out.pop(e, None)
    return TruncatedSeries._raw(a.spec, a.trunc, out)


def _unit_tail(a: TruncatedSeries, what: str, expected: Optional[Fraction] = None) -> tuple[Fraction, TruncatedSeries]:
    """Split ``a = c * (1 + t)`` and check that ``t`` is admissible."""
    c = a.constant_term()
    if not c:
        raise AdmissibilityError(f"{what} needs a nonzero constant term")
    if expected is not None and c != expected:
        raise AdmissibilityError(f"{what} needs constant term {expected}, got {c}")
    tail = {e: x / c for e, x in a.terms.items() if e != a.zero_exponent}
    for e in tail:
        if not a._layout.admissible(e):
            raise AdmissibilityError(f"{what}: monomial {dict(zip(a.spec.names, e))} leaves the expansion region")
    return c, TruncatedSeries._raw(a.spec, a.trunc, tail)


def _require_admissible(a: TruncatedSeries, what: str) -> None:
    for e in a.terms:
        if not a._layout.admissible(e):
            raise AdmissibilityError(f"{what}: monomial {dict(zip(a.spec.names, e))} leaves the expansion region")


def _power_sum(t: TruncatedSeries, weight) -> TruncatedSeries:
    """Sum of weight(k) * t**k over k >= 0 until the powers truncate to zero."""
    result = TruncatedSeries.zero(t.spec, t.trunc)
    power = TruncatedSeries.one(t.spec, t.trunc)
    k = 0
    while power.terms:
        w = weight(k)
        if w:
            result = result + power.scale(w)
        power = power * t
        k += 1
    return result


def invert(a: TruncatedSeries) -> TruncatedSeries:
    c, tail = _unit_tail(a, "invert")
    return _power_sum(-tail, lambda k: 1).scale(Fraction(1) / c)


def exp_series(a: TruncatedSeries) -> TruncatedSeries:
    if a.constant_term():
        raise AdmissibilityError("exp needs a zero constant term")
    _require_admissible(a, "exp")
    result = TruncatedSeries.one(a.spec, a.trunc)
    term = result
    k = 1
    while True:
        term = (term * a).scale(Fraction(1, k))
        if term.is_zero():
            return result
        result = result + term
        k += 1


def log_series(a: TruncatedSeries) -> TruncatedSeries:
    _, tail = _unit_tail(a, "log", expected=Fraction(1))
    return _power_sum(tail, lambda k: Fraction((-1) ** (k + 1), k) if k else 0)


def _factor_unit(image: TruncatedSeries, name: str) -> tuple[Exponents, TruncatedSeries]:
    """Write a phase binding as (unit monomial) * (series with invertible constant term)."""
    if image.constant_term():
        _unit_tail(image, f"binding for {name}")
        return image.zero_exponent, image
    n_small = image.spec.n_small
    for e in sorted(image.terms):
        if any(e[:n_small]):
            continue
        inverse = tuple(-x for x in e)
        shifted = {tuple(x + y for x, y in zip(f, inverse)): c for f, c in image.terms.items()}
        if any(any(x < 0 for x in f[:n_small]) for f in shifted):
            continue
        candidate = TruncatedSeries(image.spec, image.trunc, shifted)
        if len(candidate.terms) != len(shifted):
            continue
        try:
            _unit_tail(candidate, f"binding for {name}")
        except AdmissibilityError:
            continue
        return e, candidate
    raise AdmissibilityError(f"binding for {name} is not a unit monomial times an invertible series")


class _Powers:
    """Cached integer powers of one binding image."""

    def __init__(self, image: TruncatedSeries, name: str, phase: bool):
        self.name = name
        self.image = image
        self.phase = phase
        self.cache: dict[int, TruncatedSeries] = {0: TruncatedSeries.one(image.spec, image.trunc), 1: image}
        self.inverse: Optional[tuple[Exponents, TruncatedSeries]] = None

    def __call__(self, k: int) -> TruncatedSeries:
        if k in self.cache:
            return self.cache[k]
        if k > 0:
            value = self(k - 1) * self.image
        else:
            if not self.phase:
                raise AdmissibilityError(f"negative power of small variable {self.name}")
            if self.inverse is None:
                monomial, unit = _factor_unit(self.image, self.name)
                self.inverse = (monomial, invert(unit))
            monomial, unit_inverse = self.inverse
            # m^k * u^k with k < 0
            value = (self(k + 1) if k + 1 < 0 else TruncatedSeries.one(unit_inverse.spec, unit_inverse.trunc))
            value = value * unit_inverse
            if any(monomial):
                value = value.shift(tuple(-x for x in monomial))
        self.cache[k] = value
        return value


def substitute(
    a: TruncatedSeries,
    bindings: Mapping[str, TruncatedSeries],
    spec: Optional[VariableSpec] = None,
    trunc: Optional[Truncation] = None,
) -> TruncatedSeries:
    """Compose ``a`` with the bindings; unbound variables pass through by name into the target spec.

    The target spec and truncation are those of the binding values unless given explicitly.
    """
    if spec is None or trunc is None:
        if bindings:
            first = next(iter(bindings.values()))
            spec, trunc = spec or first.spec, trunc or first.trunc
        else:
            spec, trunc = spec or a.spec, trunc or a.trunc
    for name, image in bindings.items():
        a.spec.index(name)
        if image.spec != spec or image.trunc != trunc:
            raise SpecMismatchError(f"binding for {name} is not expressed in the target variables")
        if a.spec.is_small(name) and image.constant_term():
            raise AdmissibilityError(f"binding for small variable {name} must have zero constant term")

    bound_idx = [i for i, name in enumerate(a.spec.names) if name in bindings]
    free_idx = [i for i, name in enumerate(a.spec.names) if name not in bindings]
    target_pos = []
    for i in free_idx:
        name = a.spec.names[i]
        if name not in spec.names:
            if any(e[i] for e in a.terms):
                raise UnknownVariableError(f"variable {name!r} is neither bound nor present in the target {spec.names}")
            target_pos.append(None)
        else:
            target_pos.append(spec.index(name))
    # products run in a window widened by the full small budget; a free monomial can pull terms back into range
    wide = trunc.model_copy(update={"z_window": trunc.z_window + trunc.phase_slope * trunc.small_total_max})
    powers = {
        i: _Powers(embed(bindings[a.spec.names[i]], spec, wide), a.spec.names[i], not a.spec.is_small(a.spec.names[i]))
        for i in bound_idx
    }

    # group by bound exponents: sum of monomials in the free variables times a product of cached powers
    groups: dict[Exponents, dict[Exponents, Fraction]] = {}
    width = len(spec.names)
    for e, c in a.terms.items():
        key = tuple(e[i] for i in bound_idx)
        image = [0] * width
        for i, pos in zip(free_idx, target_pos):
            if pos is not None:
                image[pos] += e[i]
        bucket = groups.setdefault(key, {})
        image_t = tuple(image)
        bucket[image_t] = bucket.get(image_t, 0) + c

    result = TruncatedSeries.zero(spec, wide)
    for key in sorted(groups):
        factor = TruncatedSeries(spec, wide, groups[key])
        if factor.is_zero():
            continue
        for i, k in zip(bound_idx, key):
            if k:
                factor = factor * powers[i](k)
        result = result + factor
    return embed(result, spec, trunc)


def extract(a: TruncatedSeries, pattern: Mapping[str, int]) -> Union[TruncatedSeries, Fraction]:
    """Coefficient of the pattern: a rational if every variable is fixed, else a series in the rest."""
    fixed = {a.spec.index(name): x for name, x in pattern.items()}
    if len(fixed) == len(a.spec.names):
        return a.terms.get(tuple(fixed[i] for i in range(len(a.spec.names))), Fraction(0))
    keep = [i for i in range(len(a.spec.names)) if i not in fixed]
    reduced = VariableSpec(
        small_names=tuple(n for i, n in enumerate(a.spec.small_names) if i in keep),
        phase_names=tuple(n for i, n in enumerate(a.spec.phase_names, start=a.spec.n_small) if i in keep),
    )
    out = {}
    for e, c in a.terms.items():
        if all(e[i] == x for i, x in fixed.items()):
            out[tuple(e[i] for i in keep)] = c
    return TruncatedSeries(reduced, a.trunc, out)


def derivative(a: TruncatedSeries, name: str) -> TruncatedSeries:
    i = a.spec.index(name)
    out = {}
    for e, c in a.terms.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = c * e[i]
    return TruncatedSeries(a.spec, a.trunc, out)


def integrate(a: TruncatedSeries, name: str) -> TruncatedSeries:
    """Term-wise antiderivative with integration constant 0."""
    i = a.spec.index(name)
    out = {}
    for e, c in a.terms.items():
        if e[i] == -1:
            raise AdmissibilityError(f"term {dict(zip(a.spec.names, e))} integrates to a logarithm in {name}")
        f = list(e)
        f[i] += 1
        out[tuple(f)] = c / f[i]
    return TruncatedSeries(a.spec, a.trunc, out)


def embed(a: TruncatedSeries, spec: VariableSpec, trunc: Optional[Truncation] = None) -> TruncatedSeries:
    """Re-express ``a`` in ``spec`` (matching variables by name), re-truncating at ``trunc``."""
    trunc = trunc or a.trunc
    for i, name in enumerate(a.spec.names):
        if name not in spec.names and any(e[i] for e in a.terms):
            raise UnknownVariableError(f"variable {name!r} does not exist in {spec.names}")
    positions = [(i, spec.index(name)) for i, name in enumerate(a.spec.names) if name in spec.names]
    for i, j in positions:
        if a.spec.is_small(a.spec.names[i]) != spec.is_small(spec.names[j]):
            raise SpecMismatchError(f"variable {a.spec.names[i]!r} changes kind between specs")
    width = len(spec.names)
    out = {}
    for e, c in a.terms.items():
        f = [0] * width
        for i, j in positions:
            f[j] = e[i]
        out[tuple(f)] = c
    return TruncatedSeries(spec, trunc, out)


def restrict(a: TruncatedSeries, names: Iterable[str]) -> TruncatedSeries:
    """Set the named variables to zero (small variables only)."""
    idx = []
    for name in names:
        if not a.spec.is_small(name):
            raise SeriesError(f"only small variables can be set to zero, got {name!r}")
        idx.append(a.spec.index(name))
    return TruncatedSeries._raw(a.spec, a.trunc, {e: c for e, c in a.terms.items() if not any(e[i] for i in idx)})


def relabel(a: TruncatedSeries, mapping: Mapping[str, str]) -> TruncatedSeries:
    """Rename variables; a permutation of names followed by :func:`embed` gives a symmetry action."""
    for name in mapping:
        a.spec.index(name)
    spec = VariableSpec(
        small_names=tuple(mapping.get(n, n) for n in a.spec.small_names),
        phase_names=tuple(mapping.get(n, n) for n in a.spec.phase_names),
    )
    return TruncatedSeries(spec, a.trunc, a.terms)


def clip(a: TruncatedSeries, window: Optional[int] = None) -> TruncatedSeries:
    """Restrict to the displayed phase window |e_j| <= W."""
    w = a.trunc.z_window if window is None else window
    ns = a.spec.n_small
    return TruncatedSeries._raw(a.spec, a.trunc, {e: c for e, c in a.terms.items() if all(-w <= x <= w for x in e[ns:])})
