"""
Torus-invariant divisors and the class group Cl(X) = Z^{rays} / M.

The quotient basis is fixed once per fan by the Smith normal form of the ray
matrix: with U·P·V = S and P the (#rays x d) matrix of rays, the last
#rays - d coordinates of U·a are the class of the divisor a.
"""
import logging
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

from .errors import ConsistencyError, ForeignObjectError, ToricError
from .fan import require, require_valid
from .lattice import IntMatrix, identity, integer_inverse, mat_vec, smith_normal_form
from .models import CurveClass, DivisorClass, Fan, TDivisor

logger = logging.getLogger(__name__)


class ClassGroup(NamedTuple):
    u: IntMatrix
    u_inverse: IntMatrix
    offset: int


@lru_cache(maxsize=256)
def class_group(fan: Fan) -> ClassGroup:
    require(fan, smooth=True, complete=True)
    d, n = fan.rank, fan.num_rays
    if d == 0 or n == 0:
        return ClassGroup(u=identity(n), u_inverse=identity(n), offset=0)

    u, s, _ = smith_normal_form(fan.rays)
    factors = [s[i][i] for i in range(d)]
    if any(f != 1 for f in factors):
        # rays of a smooth complete fan span N, so the quotient is free
        raise ConsistencyError(f"class group has torsion, invariant factors {factors}")
    logger.debug(f"Fixed class group basis of rank {n - d}.")
    return ClassGroup(u=u, u_inverse=integer_inverse(u), offset=d)


def picard_rank(fan: Fan) -> int:
    require(fan, smooth=True, complete=True)
    return fan.num_rays - fan.rank


def canonical_divisor(fan: Fan) -> TDivisor:
    require_valid(fan)
    return TDivisor(coeffs={i: -1 for i in range(fan.num_rays)})


def principal_divisor(fan: Fan, m: Sequence[int]) -> TDivisor:
    """div(chi^m) = sum <m, u_rho> D_rho."""
    if len(m) != fan.rank:
        raise ForeignObjectError(f"character has length {len(m)}, fan has rank {fan.rank}")
    return TDivisor(coeffs={i: sum(x * y for x, y in zip(m, u)) for i, u in enumerate(fan.rays)})


def _check_divisor(fan: Fan, divisor: TDivisor) -> None:
    if set(divisor.coeffs) != set(range(fan.num_rays)):
        raise ForeignObjectError(
            f"divisor is defined on rays {sorted(divisor.coeffs)}, fan has {fan.num_rays} rays"
        )


def class_of(fan: Fan, divisor: TDivisor) -> DivisorClass:
    _check_divisor(fan, divisor)
    group = class_group(fan)
    image = mat_vec(group.u, divisor.as_tuple())
    return DivisorClass(fan=fan, representative=divisor, class_vector=image[group.offset:])


def anticanonical_class(fan: Fan) -> DivisorClass:
    return class_of(fan, canonical_divisor(fan).scaled(-1))


def divide_class(c: DivisorClass, k: int) -> Optional[DivisorClass]:
    """The unique class L with k·L = c, or None when c is not divisible by k."""
    if k < 1:
        raise ToricError(f"divisor can only be divided by a positive integer, got {k}")
    if any(x % k for x in c.class_vector):
        return None
    group = class_group(c.fan)
    quotient = tuple(x // k for x in c.class_vector)
    lift = mat_vec(group.u_inverse, (0,) * group.offset + quotient)
    return DivisorClass(fan=c.fan, representative=TDivisor.from_sequence(lift), class_vector=quotient)


def intersect(fan: Fan, divisor: TDivisor, curve: CurveClass) -> int:
    """D · C = sum D[rho] C[rho]."""
    _check_divisor(fan, divisor)
    if len(curve.pairing) != fan.num_rays:
        raise ForeignObjectError(f"curve class has {len(curve.pairing)} entries, fan has {fan.num_rays} rays")
    if any(sum(c * u[k] for c, u in zip(curve.pairing, fan.rays)) for k in range(fan.rank)):
        raise ForeignObjectError("curve class is not a numerical class of this fan")
    return sum(divisor.coeffs[i] * c for i, c in enumerate(curve.pairing))
