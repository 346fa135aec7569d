"""
Reference fans: projective spaces, powers of P^1, products, Hirzebruch
surfaces and projectivized split bundles, in particular P(T) over (P^1)^m.
"""
import logging
from functools import lru_cache
from itertools import combinations, product
from typing import List, Sequence

from .errors import HypothesisError, ToricError
from .fan import require
from .lattice import identity
from .models import Fan, TDivisor

logger = logging.getLogger(__name__)


def point_fan() -> Fan:
    return Fan(rank=0, rays=(), max_cones=((),))


@lru_cache(maxsize=32)
def fan_projective_space(n: int) -> Fan:
    if n < 1:
        raise ToricError(f"projective space needs dimension >= 1, got {n}")
    rays = identity(n) + (tuple(-1 for _ in range(n)),)
    cones = tuple(combinations(range(n + 1), n))
    return Fan(rank=n, rays=rays, max_cones=cones)


@lru_cache(maxsize=32)
def fan_p1_power(m: int) -> Fan:
    """Rays e_1..e_m, -e_1..-e_m; ray i + m is the negative of ray i."""
    if m < 1:
        raise ToricError(f"(P^1)^m needs m >= 1, got {m}")
    basis = identity(m)
    rays = basis + tuple(tuple(-x for x in e) for e in basis)
    cones = tuple(
        tuple(i + m * flip for i, flip in enumerate(signs))
        for signs in product((0, 1), repeat=m)
    )
    return Fan(rank=m, rays=rays, max_cones=cones)


def product_fan(f1: Fan, f2: Fan) -> Fan:
    d1, d2 = f1.rank, f2.rank
    rays = tuple(tuple(u) + (0,) * d2 for u in f1.rays) + tuple((0,) * d1 + tuple(v) for v in f2.rays)
    shift = f1.num_rays
    cones = tuple(
        tuple(a) + tuple(j + shift for j in b)
        for a in f1.max_cones
        for b in f2.max_cones
    )
    return Fan(rank=d1 + d2, rays=rays, max_cones=cones)


def fan_hirzebruch(a: int) -> Fan:
    if a < 0:
        raise ToricError(f"Hirzebruch surface F_a needs a >= 0, got {a}")
    rays = ((1, 0), (0, 1), (-1, a), (0, -1))
    return Fan(rank=2, rays=rays, max_cones=((0, 1), (1, 2), (2, 3), (0, 3)))


def fan_projectivized_split_bundle(base: Fan, degrees: Sequence[TDivisor]) -> Fan:
    """
    Fan of P(O(D_0) + ... + O(D_r)) over a smooth complete base, in
    Grothendieck's convention (hyperplanes), with D_0 = 0.

    The lattice is N_base + Z^r. Fiber rays are f_1..f_r and f_0 = -sum f_j;
    a base ray u_rho lifts to (u_rho, a_{1,rho}, ..., a_{r,rho}) where
    D_j = sum a_{j,rho} D_rho. Over each maximal base cone the fan is the
    product of that cone with the fan of P^r.
    """
    require(base, smooth=True, complete=True)
    if len(degrees) < 2:
        raise ToricError(f"a projective bundle needs at least two summands, got {len(degrees)}")
    n = base.num_rays
    for k, divisor in enumerate(degrees):
        if set(divisor.coeffs) != set(range(n)):
            raise ToricError(f"degree {k} is not a divisor on the {n} rays of the base")
    if any(degrees[0].coeffs.values()):
        raise HypothesisError(
            "normalized",
            "the first summand must be trivial; subtract it from every degree (P(E) = P(E ⊗ L))",
        )

    r = len(degrees) - 1
    d = base.rank
    lifted = tuple(
        tuple(u) + tuple(degrees[j].coeffs[rho] for j in range(1, r + 1))
        for rho, u in enumerate(base.rays)
    )
    fiber = tuple((0,) * d + e for e in identity(r)) + ((0,) * d + tuple(-1 for _ in range(r)),)
    # fiber ray f_j has index n + j - 1 for j >= 1 and f_0 has index n + r
    fiber_index = [n + r] + [n + j - 1 for j in range(1, r + 1)]
    cones = tuple(
        tuple(sigma) + tuple(fiber_index[k] for k in range(r + 1) if k != omitted)
        for sigma in base.max_cones
        for omitted in range(r + 1)
    )
    fan = Fan(rank=d + r, rays=lifted + fiber, max_cones=cones)
    logger.debug(f"Built projectivized bundle of rank {r + 1} over a base of dimension {d}.")
    return fan


def split_tangent_degrees(m: int) -> List[TDivisor]:
    """
    T_(P^1)^m = sum O(2 F_i) with F_i the ray divisor of e_i, twisted by
    O(-2 F_1) so the first summand is trivial.
    """
    base = fan_p1_power(m)
    degrees = []
    for i in range(m):
        coeffs = {rho: 0 for rho in range(base.num_rays)}
        coeffs[i] += 2
        coeffs[0] -= 2
        degrees.append(TDivisor(coeffs=coeffs))
    return degrees


@lru_cache(maxsize=16)
def fan_projectivized_tangent_p1_power(m: int) -> Fan:
    if m < 2:
        raise ToricError(f"P(T_(P^1)^m) is built for m >= 2, got {m}")
    return fan_projectivized_split_bundle(fan_p1_power(m), split_tangent_degrees(m))
