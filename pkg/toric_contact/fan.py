"""
Simplicial fans: structural validation, smoothness, completeness, walls and
projectivity.

Fans are frozen pydantic models and therefore hashable, so the expensive
per-fan results (facet adjacency, walls, cone inverses) are memoized with
lru_cache and shared read-only.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ConsistencyError, FanValidationError, ForeignObjectError, HypothesisError, ToricError
from .lattice import (
    IntMatrix,
    determinant,
    integer_inverse,
    is_primitive,
    is_unimodular_basis,
    mat_vec,
)
from .models import Cone, Fan, SupportFunction, ValidationReport, Wall
from .simplex import EQ, GE, LinearConstraint, find_feasible_point, is_feasible

logger = logging.getLogger(__name__)


def _dot(m: Sequence, u: Sequence[int]):
    return sum(x * y for x, y in zip(m, u))


def _cones_overlap(fan: Fan, a: Cone, b: Cone) -> bool:
    """True when the intersection of two independent d-cones is not their common face."""
    shared = sorted(set(a) & set(b))
    only_a = [i for i in a if i not in shared]
    only_b = [i for i in b if i not in shared]
    d = fan.rank

    if len(shared) == d - 1:
        # adjacent across a would-be wall: opposite rays must lie on opposite sides
        tau = fan.cone_rays(shared)
        side_a = determinant(tau + [fan.rays[only_a[0]]])
        side_b = determinant(tau + [fan.rays[only_b[0]]])
        return (side_a > 0) == (side_b > 0)

    a_rays = fan.cone_rays(a)
    if abs(determinant(a_rays)) == 1:
        # f is 1 on the rays of a outside b and 0 on the shared face; f <= 0 on b separates
        inverse = _cone_inverse(fan, a)
        f = [sum(inverse[k][a.index(i)] for i in only_a) for k in range(d)]
        if all(_dot(f, fan.rays[j]) <= 0 for j in only_b):
            return False

    # lambda >= 0 on the rays of a, mu >= 0 on the rays of b:
    # sum(lambda u) = sum(mu v) with the off-face part of lambda summing to 1
    b_rays = fan.cone_rays(b)
    num_vars = len(a) + len(b)
    constraints = []
    for k in range(d):
        coeffs = tuple(u[k] for u in a_rays) + tuple(-v[k] for v in b_rays)
        constraints.append(LinearConstraint(coeffs, EQ, 0))
    normal = tuple(int(i in only_a) for i in a) + (0,) * len(b)
    constraints.append(LinearConstraint(normal, EQ, 1))
    return is_feasible(constraints, num_vars)


def validate(fan: Fan) -> ValidationReport:
    """Collect every structural violation of the fan; never raises."""
    report = ValidationReport()
    d = fan.rank
    n = fan.num_rays

    if d < 0:
        report.add("rank", f"rank must be nonnegative, got {d}")
        return report

    for i, ray in enumerate(fan.rays):
        if len(ray) != d:
            report.add("ray-length", f"ray {i} has length {len(ray)}, expected {d}", i)
    if not report.is_valid:
        return report

    seen: Dict[Tuple[int, ...], int] = {}
    for i, ray in enumerate(fan.rays):
        if not any(ray):
            report.add("zero-ray", f"zero ray {i}", i)
        elif not is_primitive(ray):
            report.add("non-primitive", f"non-primitive ray {i}", i)
        if ray in seen:
            report.add("duplicate-ray", f"duplicate ray {i} (same as ray {seen[ray]})", seen[ray], i)
        else:
            seen[ray] = i

    if not fan.max_cones:
        report.add("no-cones", "fan has no maximal cones")

    sound: List[Tuple[int, Cone]] = []
    first_seen: Dict[Cone, int] = {}
    used = set()
    for k, cone in enumerate(fan.max_cones):
        out_of_range = [i for i in cone if not 0 <= i < n]
        for i in out_of_range:
            report.add("index-range", f"index out of range: cone {k} refers to ray {i} but there are {n} rays", k, i)
        used.update(i for i in cone if 0 <= i < n)
        if len(set(cone)) != len(cone):
            report.add("repeated-index", f"cone {k} lists a ray twice", k)
            continue
        if cone in first_seen:
            report.add("duplicate-cone", f"duplicate maximal cone {k} (same as cone {first_seen[cone]})",
                       first_seen[cone], k)
            continue
        first_seen[cone] = k
        if len(cone) > d:
            report.add("non-simplicial", f"cone {k} has {len(cone)} rays in rank {d}; only simplicial cones are accepted", k)
            continue
        if len(cone) < d:
            report.add("non-full-dimensional", f"maximal cone {k} has dimension {len(cone)} < {d}", k)
            continue
        if out_of_range:
            continue
        if d and determinant(fan.cone_rays(cone)) == 0:
            report.add("dependent-rays", f"rays of cone {k} are linearly dependent", k)
            continue
        sound.append((k, cone))

    for i in range(n):
        if i not in used:
            report.add("unused-ray", f"ray {i} lies in no maximal cone", i)

    for (k, a), (l, b) in combinations(sound, 2):
        if _cones_overlap(fan, a, b):
            report.add("bad-intersection", f"cones {k} and {l} do not meet in a common face", k, l)

    if not report.is_valid:
        logger.debug(f"Fan of rank {d} has {len(report.violations)} violations.")
    return report


def require_valid(fan: Fan) -> None:
    report = _cached_validate(fan)
    if not report.is_valid:
        raise FanValidationError(report)


@lru_cache(maxsize=256)
def _cached_validate(fan: Fan) -> ValidationReport:
    return validate(fan)


@lru_cache(maxsize=256)
def is_smooth(fan: Fan) -> bool:
    require_valid(fan)
    return all(is_unimodular_basis(fan.cone_rays(cone)) for cone in fan.max_cones)


@lru_cache(maxsize=256)
def facet_adjacency(fan: Fan) -> Dict[Cone, Tuple[Cone, ...]]:
    """Map each (d-1)-face of a maximal cone to the maximal cones containing it."""
    adjacency: Dict[Cone, List[Cone]] = {}
    for cone in fan.max_cones:
        for omitted in cone:
            facet = tuple(i for i in cone if i != omitted)
            adjacency.setdefault(facet, []).append(cone)
    return {facet: tuple(sorted(cones)) for facet, cones in sorted(adjacency.items())}


@lru_cache(maxsize=256)
def is_complete(fan: Fan) -> bool:
    """
    Ridge pairing plus connectedness: every facet of a maximal cone lies in
    exactly two maximal cones and the adjacency graph is connected. Together
    with the pairwise-intersection check of validate this is |fan| = R^d.
    """
    require_valid(fan)
    if fan.rank == 0:
        return len(fan.max_cones) == 1

    adjacency = facet_adjacency(fan)
    if any(len(cones) != 2 for cones in adjacency.values()):
        return False

    neighbours: Dict[Cone, List[Cone]] = {cone: [] for cone in fan.max_cones}
    for a, b in adjacency.values():
        neighbours[a].append(b)
        neighbours[b].append(a)
    start = fan.max_cones[0]
    reached = {start}
    stack = [start]
    while stack:
        for other in neighbours[stack.pop()]:
            if other not in reached:
                reached.add(other)
                stack.append(other)
    return len(reached) == len(fan.max_cones)


def require(fan: Fan, smooth: bool = False, complete: bool = False, projective: bool = False) -> None:
    """Raise HypothesisError naming the first hypothesis the fan misses."""
    require_valid(fan)
    if smooth and not is_smooth(fan):
        raise HypothesisError("smooth", "some maximal cone is not generated by a lattice basis")
    if complete and not is_complete(fan):
        raise HypothesisError("complete", "the fan does not cover the whole space")
    if projective and not is_projective(fan):
        raise HypothesisError("projective", "no strictly convex support function exists")


@lru_cache(maxsize=4096)
def _cone_inverse(fan: Fan, cone: Cone) -> IntMatrix:
    """Inverse of the matrix whose rows are the rays of a smooth cone."""
    return integer_inverse(fan.cone_rays(cone))


def _wall(fan: Fan, tau: Cone, sigma: Cone, sigma_prime: Cone) -> Wall:
    u = next(i for i in sigma if i not in tau)
    u_prime = next(i for i in sigma_prime if i not in tau)
    # coordinates of u' in the basis given by the rays of sigma (columns of B^T)
    inverse = _cone_inverse(fan, sigma)
    coords = mat_vec(tuple(zip(*inverse)), fan.rays[u_prime])
    position = dict(zip(sigma, coords))
    if position[u] != -1:
        raise ConsistencyError(f"wall {tau}: coefficient of the opposite ray is {position[u]}, expected -1")

    relation = {u: 1, u_prime: 1}
    relation.update({i: -position[i] for i in tau})
    relation = dict(sorted(relation.items()))
    total = [sum(c * fan.rays[i][k] for i, c in relation.items()) for k in range(fan.rank)]
    if any(total):
        raise ConsistencyError(f"wall {tau}: relation does not vanish")
    return Wall(tau=tau, sigma=sigma, sigma_prime=sigma_prime, relation=relation)


@lru_cache(maxsize=256)
def walls(fan: Fan) -> Tuple[Wall, ...]:
    """One wall per (d-1)-cone, in lexicographic order of tau."""
    require(fan, smooth=True, complete=True)
    result = tuple(_wall(fan, tau, a, b) for tau, (a, b) in facet_adjacency(fan).items())
    logger.debug(f"Computed {len(result)} walls for a fan with {len(fan.max_cones)} maximal cones.")
    return result


def _slope(fan: Fan, cone: Cone, values: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    # m with m . u_rho = h_rho on the rays of the cone: m = B^{-1} h
    inverse = _cone_inverse(fan, cone)
    local = [values[i] for i in cone]
    return tuple(Fraction(sum(x * y for x, y in zip(row, local))) for row in inverse)


@lru_cache(maxsize=256)
def projectivity_witness(fan: Fan) -> Optional[SupportFunction]:
    """
    Strictly convex support function as an exact rational feasibility problem.
    Unknowns are a = -h on the rays, split as p - q with p, q >= 0, and every
    distinct wall relation C must satisfy C . a >= 1.
    """
    require(fan, smooth=True, complete=True)
    n = fan.num_rays
    classes = sorted({w.coefficient_vector(n) for w in walls(fan)})
    constraints = [LinearConstraint(tuple(c) + tuple(-x for x in c), GE, 1) for c in classes]
    point = find_feasible_point(constraints, 2 * n)
    if point is None:
        logger.info(f"No strictly convex support function for a fan with {n} rays.")
        return None

    values = tuple(-(point[i] - point[n + i]) for i in range(n))
    cones = tuple(sorted(fan.max_cones))
    witness = SupportFunction(
        values=values,
        cones=cones,
        slopes=tuple(_slope(fan, cone, values) for cone in cones),
    )
    if not verify_support_function(fan, witness):
        raise ConsistencyError("support function returned by the solver fails verification")
    return witness


def is_projective(fan: Fan) -> bool:
    return projectivity_witness(fan) is not None


def verify_support_function(fan: Fan, witness: SupportFunction) -> bool:
    """Re-check every equality and strict inequality of a witness without the solver."""
    if sorted(witness.cones) != sorted(fan.max_cones):
        return False
    for cone in fan.max_cones:
        m = witness.slope(cone)
        if any(_dot(m, fan.rays[i]) != witness.values[i] for i in cone):
            return False
    for wall in walls(fan):
        m = witness.slope(wall.sigma)
        m_prime = witness.slope(wall.sigma_prime)
        if any(_dot(m, fan.rays[i]) != _dot(m_prime, fan.rays[i]) for i in wall.tau):
            return False
        u, u_prime = fan.rays[wall.opposite], fan.rays[wall.opposite_prime]
        if not _dot(m, u_prime) > _dot(m_prime, u_prime):
            return False
        if not _dot(m_prime, u) > _dot(m, u):
            return False
    return True


def orbit_dim(fan: Fan, cone: Sequence[int]) -> int:
    """Dimension of the orbit closure V(cone)."""
    cone = tuple(sorted(cone))
    if not any(set(cone) <= set(sigma) for sigma in fan.max_cones):
        raise ForeignObjectError(f"cone {list(cone)} is not a cone of the fan")
    return fan.rank - len(cone)


def canonical_fan(fan: Fan) -> Fan:
    """Same fan with rays sorted lexicographically and cones sorted."""
    order = sorted(range(fan.num_rays), key=lambda i: fan.rays[i])
    new_index = {old: new for new, old in enumerate(order)}
    cones = sorted(tuple(sorted(new_index[i] for i in cone)) for cone in fan.max_cones)
    return Fan(rank=fan.rank, rays=tuple(fan.rays[i] for i in order), max_cones=tuple(cones))


def transform_fan(fan: Fan, g: Sequence[Sequence[int]]) -> Fan:
    """Image of the fan under a unimodular map g (acting on column vectors)."""
    if len(g) != fan.rank or determinant(g) not in (1, -1):
        raise ToricError("re-coordinatization needs a unimodular matrix of the fan's rank")
    return Fan(rank=fan.rank, rays=tuple(mat_vec(g, u) for u in fan.rays), max_cones=fan.max_cones)
