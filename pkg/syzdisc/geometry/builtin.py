import json
from pathlib import Path
from typing import Literal, Optional

from loguru import logger
from pydantic import BaseModel, Field

from syzdisc.conf.env import settings
from syzdisc.errors import GeometryError
from syzdisc.series.kernel import UV, Truncation

GeometryKind = Literal["toric", "local-surface", "abelian-family"]
Convention = Literal["inner", "plain", "negated", "twisted"]


class TruncationConfig(BaseModel):
    q_total: int = Field(ge=0, description="Total degree cap over the Kähler variables")
    uv_max: int = Field(default=0, ge=0, description="Degree cap on uv")
    z_window: int = Field(default=0, ge=0, description="Displayed phase window")
    per_q_max: Optional[int] = Field(default=None, ge=0, description="Same cap applied to every Kähler variable")
    phase_slope: Optional[int] = Field(default=None, ge=0, description="Working-region slope; defaults to SYZDISC_PHASE_SLOPE")

    def to_truncation(self, kahler_names: tuple[str, ...]) -> Truncation:
        caps = {UV: self.uv_max}
        if self.per_q_max is not None:
            caps.update({name: self.per_q_max for name in kahler_names})
        return Truncation(
            small_total_max=self.q_total + self.uv_max,
            group_max=((kahler_names, self.q_total),),
            per_small_max=caps,
            z_window=self.z_window,
            phase_slope=settings.PHASE_SLOPE if self.phase_slope is None else self.phase_slope,
        )

    def with_overrides(self, q_total: Optional[int] = None, uv_max: Optional[int] = None, z_window: Optional[int] = None) -> "TruncationConfig":
        updates = {key: value for key, value in (("q_total", q_total), ("uv_max", uv_max), ("z_window", z_window)) if value is not None}
        return self.model_copy(update=updates)


class GeometryConfig(BaseModel):
    """A geometry as read from JSON or from the builtin registry."""

    name: str = Field(default="custom", description="Display name")
    kind: GeometryKind = Field(default="toric", description="Which mirror builder to use")
    points: list[list[int]] = Field(default_factory=list, description="Lattice points, height coordinate implicit")
    sigma: list[int] = Field(default_factory=list, description="Indices of the basis cone")
    chamber: int = Field(default=0, description="Chamber base point index, must lie in sigma")
    frame: Optional[list[list[int]]] = Field(default=None, description="Frame rows; standard chart frame when omitted")
    truncation: TruncationConfig
    mirror_order: Optional[int] = Field(default=None, ge=1, description="Order of the mirror map; defaults to q_total")
    convention: Convention = Field(default="plain", description="Sign convention of the coefficient table")
    display_names: dict[str, str] = Field(default_factory=dict, description="Variable names used only when printing")

    @property
    def order(self) -> int:
        return self.mirror_order or max(self.truncation.q_total, 1)


BUILTIN_GEOMETRIES: dict[str, GeometryConfig] = {
    "C3": GeometryConfig(
        name="C3",
        points=[[0, 0], [1, 0], [0, 1]],
        sigma=[0, 1, 2],
        truncation=TruncationConfig(q_total=0, uv_max=2, z_window=3),
    ),
    "KP2-inner": GeometryConfig(
        name="KP2-inner",
        points=[[0, 0], [1, 0], [0, 1], [-1, -1]],
        sigma=[0, 1, 2],
        chamber=0,
        frame=[[1, 0], [0, 1]],
        truncation=TruncationConfig(q_total=3, uv_max=2, z_window=4),
        mirror_order=5,
        convention="inner",
    ),
    "KP2-outer": GeometryConfig(
        name="KP2-outer",
        points=[[0, 0], [1, 0], [0, 1], [-1, -1]],
        sigma=[0, 1, 2],
        chamber=2,
        frame=[[1, -1], [0, -1]],
        truncation=TruncationConfig(q_total=3, uv_max=2, z_window=4),
        mirror_order=5,
        convention="inner",
    ),
    "KP3": GeometryConfig(
        name="KP3",
        points=[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]],
        sigma=[0, 1, 2, 3],
        chamber=0,
        frame=[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        truncation=TruncationConfig(q_total=2, uv_max=0, z_window=3),
        mirror_order=5,
        convention="twisted",
    ),
    "local-surface-A0": GeometryConfig(
        name="local-surface-A0",
        kind="local-surface",
        truncation=TruncationConfig(q_total=5, uv_max=5, z_window=1),
        convention="negated",
    ),
    "abelian-family": GeometryConfig(
        name="abelian-family",
        kind="abelian-family",
        truncation=TruncationConfig(q_total=6, per_q_max=2, uv_max=0, z_window=2),
        convention="plain",
        display_names={"z2": "w"},
    ),
}


def resolve_geometry(geometry: str) -> GeometryConfig:
    """Builtin name or path to a JSON config.

    Environment truncation values override a builtin's truncation but only fill the fields a JSON config omits.
    """
    if geometry in BUILTIN_GEOMETRIES:
        config = BUILTIN_GEOMETRIES[geometry]
        truncation = config.truncation.with_overrides(settings.Q_TOTAL, settings.UV_MAX, settings.Z_WINDOW)
        return config.model_copy(update={"truncation": truncation})
    path = Path(geometry)
    if not path.is_file():
        raise GeometryError(f"unknown geometry {geometry!r}: not a builtin name ({', '.join(BUILTIN_GEOMETRIES)}) nor a file")
    raw = json.loads(path.read_text())
    raw.setdefault("name", path.stem)
    truncation = raw.setdefault("truncation", {})
    if isinstance(truncation, dict):
        for key, value in (("q_total", settings.Q_TOTAL), ("uv_max", settings.UV_MAX), ("z_window", settings.Z_WINDOW)):
            if value is not None:
                truncation.setdefault(key, value)
    config = GeometryConfig.model_validate(raw)
    logger.info(f"loaded geometry {config.name} from {path}")
    return config
