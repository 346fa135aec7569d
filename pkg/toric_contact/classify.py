"""
Split tangent criterion, fan isomorphism up to GL(d, Z), and the contact
classification of smooth projective toric varieties of odd dimension.
"""
import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .builders import fan_projective_space, fan_projectivized_tangent_p1_power
from .divisor import anticanonical_class, divide_class, picard_rank
from .errors import ConsistencyError
from .fan import require, walls
from .lattice import determinant, integer_inverse, is_unimodular_basis, mat_mul, mat_vec, transpose
from .models import (
    ClassificationReport,
    Cone,
    ContactEvidence,
    Fan,
    FanIsomorphism,
    Verdict,
    VerdictKind,
    Wall,
)
from .mori import extremal_rays, is_fano, ray_length

logger = logging.getLogger(__name__)


def has_split_tangent(fan: Fan, strict: bool = False) -> bool:
    """Across every wall the two opposite rays are negatives of each other."""
    require(fan, smooth=True, complete=True, projective=strict)
    return all(not any(w.alpha.values()) for w in walls(fan))


def is_p1_power(fan: Fan) -> Optional[int]:
    """m when the fan is the cube fan of (P^1)^m in some lattice basis."""
    d = fan.rank
    if d < 1 or fan.num_rays != 2 * d or len(fan.max_cones) != 2 ** d:
        return None
    index = {ray: i for i, ray in enumerate(fan.rays)}
    pair_of: Dict[int, Tuple[int, ...]] = {}
    for i, ray in enumerate(fan.rays):
        negative = tuple(-x for x in ray)
        if negative not in index:
            return None
        pair_of[i] = max(ray, negative)
    basis = sorted(set(pair_of.values()))
    if len(basis) != d or not is_unimodular_basis(basis):
        return None

    seen = set()
    for cone in fan.max_cones:
        if len(cone) != d or any(not 0 <= i < fan.num_rays for i in cone):
            return None
        if len({pair_of[i] for i in cone}) != d:
            return None
        seen.add(frozenset(cone))
    return d if len(seen) == 2 ** d else None


@lru_cache(maxsize=256)
def _walls_by_tau(fan: Fan) -> Dict[Cone, Wall]:
    return {w.tau: w for w in walls(fan)}


@lru_cache(maxsize=256)
def _ray_signatures(fan: Fan) -> Tuple[tuple, ...]:
    """Per ray: number of maximal cones containing it and its wall coefficients."""
    degree = [0] * fan.num_rays
    for cone in fan.max_cones:
        for i in cone:
            degree[i] += 1
    coefficients: List[List[int]] = [[] for _ in range(fan.num_rays)]
    for w in walls(fan):
        for i, c in w.relation.items():
            coefficients[i].append(c)
    return tuple((degree[i], tuple(sorted(coefficients[i]))) for i in range(fan.num_rays))


@lru_cache(maxsize=256)
def _invariant_profile(fan: Fan) -> tuple:
    relations = sorted(tuple(sorted(w.relation.values())) for w in walls(fan))
    return tuple(relations), tuple(sorted(_ray_signatures(fan)))


def _facet_coefficients(fan: Fan, cone: Cone) -> List[List[Optional[int]]]:
    """a[i][j]: coefficient of ray cone[j] in the wall opposite to ray cone[i]."""
    by_tau = _walls_by_tau(fan)
    d = len(cone)
    table: List[List[Optional[int]]] = [[None] * d for _ in range(d)]
    for i in range(d):
        wall = by_tau[tuple(x for x in cone if x != cone[i])]
        for j in range(d):
            table[i][j] = wall.relation[cone[j]]
    return table


def _assignments(anchor: Cone, target: Cone, sig1, sig2, a1, a2) -> Iterator[Tuple[int, ...]]:
    """Orderings of `target` matching `anchor` ray by ray, in lexicographic order."""
    d = len(anchor)
    chosen: List[int] = [0] * d
    used = [False] * d

    def extend(i: int) -> Iterator[Tuple[int, ...]]:
        if i == d:
            yield tuple(chosen)
            return
        for p in range(d):
            if used[p] or sig1[anchor[i]] != sig2[target[p]]:
                continue
            if any(a1[i][j] != a2[p][chosen[j]] or a1[j][i] != a2[chosen[j]][p] for j in range(i)):
                continue
            chosen[i] = p
            used[p] = True
            yield from extend(i + 1)
            used[p] = False

    return extend(0)


def _witness(f1: Fan, f2: Fan, anchor_rays: Sequence[Sequence[int]],
             anchor_inverse, image_rays: Sequence[Sequence[int]]) -> Optional[FanIsomorphism]:
    g = mat_mul(transpose(image_rays), anchor_inverse)
    index2 = {ray: i for i, ray in enumerate(f2.rays)}
    permutation = []
    for ray in f1.rays:
        j = index2.get(mat_vec(g, ray))
        if j is None:
            return None
        permutation.append(j)
    candidate = FanIsomorphism(matrix=g, ray_permutation=tuple(permutation))
    return candidate if verify_isomorphism(f1, f2, candidate) else None


def verify_isomorphism(f1: Fan, f2: Fan, iso: FanIsomorphism) -> bool:
    """Independent check that iso carries rays onto rays and cones onto cones."""
    d = f1.rank
    if f2.rank != d or len(iso.matrix) != d or any(len(row) != d for row in iso.matrix):
        return False
    if d and determinant(iso.matrix) not in (1, -1):
        return False
    perm = iso.ray_permutation
    if sorted(perm) != list(range(f2.num_rays)) or len(perm) != f1.num_rays:
        return False
    if any(mat_vec(iso.matrix, u) != f2.rays[perm[i]] for i, u in enumerate(f1.rays)):
        return False
    images = {frozenset(perm[i] for i in cone) for cone in f1.max_cones}
    return len(f1.max_cones) == len(f2.max_cones) and images == {frozenset(c) for c in f2.max_cones}


def fan_isomorphic(f1: Fan, f2: Fan) -> Optional[FanIsomorphism]:
    """
    Lexicographically first unimodular map carrying f1 onto f2, or None.
    The search fixes the least maximal cone of f1 and tries every maximal
    cone of f2 with every ray ordering compatible with the wall relations.
    """
    if f1.rank != f2.rank or f1.num_rays != f2.num_rays or len(f1.max_cones) != len(f2.max_cones):
        return None
    if f1.rank == 0:
        return FanIsomorphism(matrix=(), ray_permutation=())
    require(f1, smooth=True, complete=True)
    require(f2, smooth=True, complete=True)
    if _invariant_profile(f1) != _invariant_profile(f2):
        logger.debug("Wall invariants differ; fans are not isomorphic.")
        return None

    anchor = min(f1.max_cones)
    anchor_rays = f1.cone_rays(anchor)
    anchor_inverse = integer_inverse(transpose(anchor_rays))
    sig1, sig2 = _ray_signatures(f1), _ray_signatures(f2)
    a1 = _facet_coefficients(f1, anchor)

    tried = 0
    for target in sorted(f2.max_cones):
        a2 = _facet_coefficients(f2, target)
        for order in _assignments(anchor, target, sig1, sig2, a1, a2):
            tried += 1
            image_rays = [f2.rays[target[p]] for p in order]
            iso = _witness(f1, f2, anchor_rays, anchor_inverse, image_rays)
            if iso is not None:
                logger.debug(f"Isomorphism found after {tried} candidate maps.")
                return iso
    logger.debug(f"No isomorphism after {tried} candidate maps.")
    return None


def classify_contact(fan: Fan, full_evidence: bool = False) -> ClassificationReport:
    """
    Decide whether the smooth projective toric variety of the fan carries a
    contact structure: it must have dimension 2n+1 and be P^{2n+1} or
    P(T_(P^1)^{n+1}). With full_evidence both isomorphism tests also run
    when -K is not divisible by n+1.
    """
    require(fan, smooth=True, complete=True, projective=True)
    d = fan.rank
    evidence = ContactEvidence(dimension=d, odd_dimension=d % 2 == 1)
    not_contact = Verdict(kind=VerdictKind.NOT_CONTACT)

    if d % 2 == 0:
        evidence.notes.append("even dimension; a contact variety has odd dimension 2n+1")
        return ClassificationReport(verdict=not_contact, evidence=evidence)
    n = (d - 1) // 2
    evidence.n = n
    if n < 1:
        evidence.notes.append("dimension 1 lies outside the range n >= 1")
        return ClassificationReport(verdict=not_contact, evidence=evidence)

    evidence.picard_rank = picard_rank(fan)
    evidence.fano = is_fano(fan)
    anti = anticanonical_class(fan)
    evidence.anticanonical_class = anti.class_vector
    line = divide_class(anti, n + 1)
    evidence.anticanonical_divisible = line is not None
    if line is not None:
        evidence.contact_line_class = line.class_vector

    lengths = sorted(ray_length(fan, r) for r in extremal_rays(fan))
    evidence.extremal_lengths = lengths
    evidence.length_dichotomy = any(length in (n + 1, 2 * n + 2) for length in lengths)

    if line is None:
        evidence.notes.append(f"-K is not divisible by n+1 = {n + 1}")
        if not full_evidence:
            return ClassificationReport(verdict=not_contact, evidence=evidence)

    projective_space = fan_isomorphic(fan, fan_projective_space(d))
    evidence.projective_space_test = projective_space is not None
    tangent = fan_isomorphic(fan, fan_projectivized_tangent_p1_power(n + 1))
    evidence.p1_tangent_test = tangent is not None

    verdict = not_contact
    witness = None
    if line is not None and projective_space is not None:
        verdict, witness = Verdict(kind=VerdictKind.PROJECTIVE_SPACE, n=n), projective_space
        reference = fan_projective_space(d)
    elif line is not None and tangent is not None:
        verdict, witness = Verdict(kind=VerdictKind.PROJECTIVIZED_TANGENT, n=n), tangent
        reference = fan_projectivized_tangent_p1_power(n + 1)

    if witness is not None:
        if not verify_isomorphism(fan, reference, witness):
            raise ConsistencyError("isomorphism witness fails independent verification")
        evidence.isomorphism = witness
    logger.info(f"Classified fan of dimension {d}: {verdict.line}")
    return ClassificationReport(verdict=verdict, evidence=evidence)
