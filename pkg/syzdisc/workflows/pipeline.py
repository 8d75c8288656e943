from typing import Optional

from loguru import logger
from pydantic import BaseModel, ConfigDict
from toolz import memoize

from syzdisc.geometry.builtin import GeometryConfig
from syzdisc.geometry.toric import ToricCYData, build_frame, build_toric_data
from syzdisc.mirror.mirror_map import MirrorMap, compute_mirror_map
from syzdisc.mirror.slab import SlabFunction, slab_function
from syzdisc.series.kernel import Truncation
from syzdisc.solver.gluing import GluingSolution, solve_gluing
from syzdisc.solver.potential import EquivariantPotential, equivariant_potential
from syzdisc.special.surfaces import ABELIAN_KAHLER, SURFACE_KAHLER, abelian_family_mirror, local_surface_mirror


class SlabStage(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: GeometryConfig
    data: Optional[ToricCYData] = None
    mirror: Optional[MirrorMap] = None
    slab: SlabFunction


class PipelineResult(SlabStage):
    solution: GluingSolution
    potential: EquivariantPotential


def _config_key(args, kwargs) -> str:
    return args[0].model_dump_json()


def toric_data_of(config: GeometryConfig) -> ToricCYData:
    return build_toric_data(config.points, config.sigma)


def truncation_of(config: GeometryConfig, kahler_names: tuple[str, ...]) -> Truncation:
    return config.truncation.to_truncation(kahler_names)


def _build_slab(config: GeometryConfig) -> SlabStage:
    logger.info(f"building slab function for {config.name} ({config.kind})")
    if config.kind == "local-surface":
        mirror = local_surface_mirror(truncation_of(config, SURFACE_KAHLER))
        return SlabStage(config=config, slab=mirror.as_slab())
    if config.kind == "abelian-family":
        mirror = abelian_family_mirror(truncation_of(config, ABELIAN_KAHLER))
        return SlabStage(config=config, slab=mirror.as_slab())
    data = toric_data_of(config)
    frame = build_frame(data, config.chamber, config.frame)
    trunc = truncation_of(config, data.kahler_names)
    mirror_map = compute_mirror_map(data, max(config.order, config.truncation.q_total, 1))
    slab = slab_function(data, frame, trunc, mirror_map)
    return SlabStage(config=config, data=data, mirror=mirror_map, slab=slab)


def _run_pipeline(config: GeometryConfig) -> PipelineResult:
    stage = build_slab(config)
    solution = solve_gluing(stage.slab)
    potential = equivariant_potential(solution)
    logger.info(f"{config.name}: log Z has {len(potential.lambda_coefficient)} terms")
    return PipelineResult(**dict(stage), solution=solution, potential=potential)


build_slab = memoize(_build_slab, key=_config_key)
run_pipeline = memoize(_run_pipeline, key=_config_key)
