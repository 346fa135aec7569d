"""
Curve classes of invariant curves V(tau), the Mori cone they generate,
its extremal rays, their lengths and the shape of their contractions.
"""
import logging
from functools import lru_cache
from math import gcd
from typing import Dict, List, Tuple

from .errors import ConsistencyError, ForeignObjectError, NotExtremalError
from .fan import require, walls
from .models import ContractionProfile, ContractionType, CurveClass, Fan, Wall
from .simplex import EQ, LinearConstraint, is_feasible

logger = logging.getLogger(__name__)


def _direction(c: CurveClass) -> Tuple[int, ...]:
    g = gcd(*c.pairing) if c.pairing else 0
    return tuple(x // g for x in c.pairing) if g else c.pairing


def _class_of_wall(fan: Fan, wall: Wall) -> CurveClass:
    return CurveClass(pairing=wall.coefficient_vector(fan.num_rays))


def wall_classes(fan: Fan) -> List[Tuple[Wall, CurveClass]]:
    return [(w, _class_of_wall(fan, w)) for w in walls(fan)]


def curve_class(fan: Fan, wall: Wall) -> CurveClass:
    """[V(tau)] paired with every ray divisor: the wall relation coefficients."""
    own = next((w for w in walls(fan) if w.tau == wall.tau), None)
    if own is None or own != wall:
        raise ForeignObjectError(f"wall at tau={list(wall.tau)} is not a wall of this fan")
    return _class_of_wall(fan, own)


def anticanonical_degree(fan: Fan, c: CurveClass) -> int:
    """-K · C; -K is the sum of all ray divisors."""
    if len(c.pairing) != fan.num_rays:
        raise ForeignObjectError(f"curve class has {len(c.pairing)} entries, fan has {fan.num_rays} rays")
    return sum(c.pairing)


def is_fano(fan: Fan) -> bool:
    return all(anticanonical_degree(fan, c) > 0 for _, c in wall_classes(fan))


def mori_generators(fan: Fan) -> List[CurveClass]:
    """Distinct wall classes in wall order; they span NE(X)."""
    require(fan, smooth=True, complete=True, projective=True)
    seen = set()
    generators = []
    for _, c in wall_classes(fan):
        if c.pairing not in seen:
            seen.add(c.pairing)
            generators.append(c)
    return generators


def _is_nonnegative_combination(target: CurveClass, others: List[CurveClass]) -> bool:
    if not others:
        return False
    constraints = [
        LinearConstraint(tuple(h.pairing[k] for h in others), EQ, target.pairing[k])
        for k in range(len(target.pairing))
    ]
    return is_feasible(constraints, len(others))


def extremal_rays(fan: Fan) -> List[CurveClass]:
    """
    Extreme rays of the cone spanned by the wall classes. Proportional
    generators collapse to the one with the smallest multiple of the common
    primitive direction.
    """
    return list(_extremal_rays(fan))


@lru_cache(maxsize=256)
def _extremal_rays(fan: Fan) -> Tuple[CurveClass, ...]:
    representatives: Dict[Tuple[int, ...], CurveClass] = {}
    for c in mori_generators(fan):
        key = _direction(c)
        best = representatives.get(key)
        if best is None or gcd(*c.pairing) < gcd(*best.pairing):
            representatives[key] = c

    candidates = list(representatives.values())
    rays = [
        g for g in candidates
        if not _is_nonnegative_combination(g, [h for h in candidates if h is not g])
    ]
    logger.debug(f"{len(rays)} extremal rays among {len(candidates)} generator directions.")
    return tuple(rays)


def _ray_walls(fan: Fan, r: CurveClass) -> Tuple[CurveClass, List[Tuple[Wall, CurveClass]]]:
    if len(r.pairing) != fan.num_rays:
        raise ForeignObjectError(f"curve class has {len(r.pairing)} entries, fan has {fan.num_rays} rays")
    key = _direction(r)
    ray = next((g for g in extremal_rays(fan) if _direction(g) == key), None)
    if ray is None or not any(r.pairing):
        raise NotExtremalError(f"class {list(r.pairing)} does not span an extremal ray")
    return ray, [(w, c) for w, c in wall_classes(fan) if _direction(c) == key]


def ray_length(fan: Fan, r: CurveClass) -> int:
    """Minimum of -K · [V(tau)] over the walls whose class lies on R+ r."""
    _, on_ray = _ray_walls(fan, r)
    return min(anticanonical_degree(fan, c) for _, c in on_ray)


def contraction_profile(fan: Fan, r: CurveClass) -> ContractionProfile:
    """
    Sign pattern of a minimal-length wall relation on the ray: negative rays
    span the exceptional locus V(neg), positive rays give the fiber dimension.
    """
    ray, on_ray = _ray_walls(fan, r)
    length = min(anticanonical_degree(fan, c) for _, c in on_ray)
    wall = next(w for w, c in on_ray if anticanonical_degree(fan, c) == length)

    coefficients = list(wall.relation.values())
    pos = sum(1 for x in coefficients if x > 0)
    neg = sum(1 for x in coefficients if x < 0)
    zero = len(coefficients) - pos - neg
    if neg == 0:
        kind = ContractionType.FIBRATION
    elif neg == 1:
        kind = ContractionType.DIVISORIAL
    else:
        kind = ContractionType.SMALL

    d = fan.rank
    locus_dim = d - neg
    fiber_dim = pos - 1
    profile = ContractionProfile(
        ray=ray,
        length=length,
        pos_rays=pos,
        neg_rays=neg,
        zero_rays=zero,
        type=kind,
        locus_dim=locus_dim,
        fiber_dim=fiber_dim,
        image_dim=locus_dim - fiber_dim,
        k_negative=length > 0,
    )

    if fiber_dim + locus_dim < d + length - 1:
        raise ConsistencyError(
            f"Wisniewski inequality fails on ray {list(ray.pairing)}: "
            f"{fiber_dim} + {locus_dim} < {d} + {length} - 1"
        )
    if profile.k_negative:
        if length > d + 1:
            raise ConsistencyError(f"extremal ray {list(ray.pairing)} has length {length} > dim + 1")
    else:
        logger.info(f"Extremal ray {list(ray.pairing)} is not K-negative (length {length}).")
    return profile
