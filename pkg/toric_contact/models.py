from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from .lattice import IntMatrix, LatticeVector, integer_inverse, mat_mul

Cone = Tuple[int, ...]


class Fan(BaseModel):
    """
    A fan in N = Z^rank: primitive rays and maximal cones given as sorted
    tuples of ray indices. Structural soundness is checked by fan.validate,
    not at construction, so that every violation can be reported at once.
    """
    model_config = ConfigDict(frozen=True)

    rank: int
    rays: Tuple[LatticeVector, ...]
    max_cones: Tuple[Cone, ...]

    @field_validator("max_cones", mode="after")
    @classmethod
    def _sorted_cones(cls, cones: Tuple[Cone, ...]) -> Tuple[Cone, ...]:
        return tuple(tuple(sorted(cone)) for cone in cones)

    @property
    def num_rays(self) -> int:
        return len(self.rays)

    def ray(self, index: int) -> LatticeVector:
        return self.rays[index]

    def cone_rays(self, cone: Cone) -> List[LatticeVector]:
        return [self.rays[i] for i in cone]


class Violation(BaseModel):
    code: str
    message: str
    indices: Tuple[int, ...] = ()


class ValidationReport(BaseModel):
    violations: List[Violation] = Field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str, *indices: int) -> None:
        self.violations.append(Violation(code=code, message=message, indices=tuple(indices)))


class Wall(BaseModel):
    """
    A (d-1)-cone tau between two maximal cones, with the relation
    u + u' + sum(alpha_i * e_i) = 0 keyed by ray index.
    """
    model_config = ConfigDict(frozen=True)

    tau: Cone
    sigma: Cone
    sigma_prime: Cone
    relation: Dict[int, int]

    @property
    def opposite(self) -> int:
        return next(i for i in self.sigma if i not in self.tau)

    @property
    def opposite_prime(self) -> int:
        return next(i for i in self.sigma_prime if i not in self.tau)

    @property
    def alpha(self) -> Dict[int, int]:
        return {i: self.relation[i] for i in self.tau}

    def coefficient_vector(self, num_rays: int) -> Tuple[int, ...]:
        return tuple(self.relation.get(i, 0) for i in range(num_rays))


class SupportFunction(BaseModel):
    """Piecewise-linear witness of projectivity: h on rays, m_sigma on each maximal cone."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: Tuple[Fraction, ...]
    cones: Tuple[Cone, ...]
    slopes: Tuple[Tuple[Fraction, ...], ...]

    def slope(self, cone: Cone) -> Tuple[Fraction, ...]:
        return self.slopes[self.cones.index(tuple(sorted(cone)))]

    @field_serializer("values")
    def _dump_values(self, values: Tuple[Fraction, ...]) -> List[str]:
        return [str(x) for x in values]

    @field_serializer("slopes")
    def _dump_slopes(self, slopes: Tuple[Tuple[Fraction, ...], ...]) -> List[List[str]]:
        return [[str(x) for x in m] for m in slopes]


class TDivisor(BaseModel):
    """Torus-invariant divisor sum(coeffs[rho] * D_rho)."""
    model_config = ConfigDict(frozen=True)

    coeffs: Dict[int, int]

    @classmethod
    def from_sequence(cls, values) -> "TDivisor":
        return cls(coeffs={i: int(v) for i, v in enumerate(values)})

    def as_tuple(self) -> Tuple[int, ...]:
        return tuple(self.coeffs[i] for i in sorted(self.coeffs))

    def __add__(self, other: "TDivisor") -> "TDivisor":
        keys = set(self.coeffs) | set(other.coeffs)
        return TDivisor(coeffs={k: self.coeffs.get(k, 0) + other.coeffs.get(k, 0) for k in sorted(keys)})

    def scaled(self, k: int) -> "TDivisor":
        return TDivisor(coeffs={i: k * c for i, c in self.coeffs.items()})


class DivisorClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    fan: Fan = Field(exclude=True, repr=False)
    representative: TDivisor
    class_vector: Tuple[int, ...]


class CurveClass(BaseModel):
    """Numerical class of a 1-cycle, stored as its pairings with every ray divisor."""
    model_config = ConfigDict(frozen=True)

    pairing: Tuple[int, ...]

    def __getitem__(self, index: int) -> int:
        return self.pairing[index]


class ContractionType(str, Enum):
    FIBRATION = "fibration"
    DIVISORIAL = "divisorial"
    SMALL = "small"


class ContractionProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    ray: CurveClass
    length: int
    pos_rays: int
    neg_rays: int
    zero_rays: int
    type: ContractionType
    locus_dim: int
    fiber_dim: int
    image_dim: int
    k_negative: bool


class FanIsomorphism(BaseModel):
    """g in GL(d, Z) with g(ray i of the source) = ray ray_permutation[i] of the target."""
    model_config = ConfigDict(frozen=True)

    matrix: IntMatrix
    ray_permutation: Tuple[int, ...]

    def inverse(self) -> "FanIsomorphism":
        back = [0] * len(self.ray_permutation)
        for i, j in enumerate(self.ray_permutation):
            back[j] = i
        return FanIsomorphism(matrix=integer_inverse(self.matrix), ray_permutation=tuple(back))

    def compose(self, then: "FanIsomorphism") -> "FanIsomorphism":
        """The isomorphism `then` after `self`."""
        return FanIsomorphism(
            matrix=mat_mul(then.matrix, self.matrix),
            ray_permutation=tuple(then.ray_permutation[j] for j in self.ray_permutation),
        )


class VerdictKind(str, Enum):
    PROJECTIVE_SPACE = "ProjectiveSpace"
    PROJECTIVIZED_TANGENT = "ProjectivizedTangentOfP1Power"
    NOT_CONTACT = "NotContact"


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: VerdictKind
    n: Optional[int] = None

    @property
    def line(self) -> str:
        if self.kind == VerdictKind.PROJECTIVE_SPACE:
            return f"CONTACT: P^{2 * self.n + 1}"
        if self.kind == VerdictKind.PROJECTIVIZED_TANGENT:
            return f"CONTACT: P(T_(P1)^{self.n + 1})"
        return "NOT-CONTACT"


class ContactEvidence(BaseModel):
    dimension: int
    odd_dimension: bool
    n: Optional[int] = None
    picard_rank: Optional[int] = None
    fano: Optional[bool] = None
    anticanonical_class: Optional[Tuple[int, ...]] = None
    anticanonical_divisible: Optional[bool] = None
    contact_line_class: Optional[Tuple[int, ...]] = None
    extremal_lengths: List[int] = Field(default_factory=list)
    length_dichotomy: Optional[bool] = None
    projective_space_test: Optional[bool] = None
    p1_tangent_test: Optional[bool] = None
    isomorphism: Optional[FanIsomorphism] = None
    notes: List[str] = Field(default_factory=list)


class ClassificationReport(BaseModel):
    verdict: Verdict
    evidence: ContactEvidence


class FanFile(BaseModel):
    """On-disk fan schema. Strict: integers only, no extra keys."""
    model_config = ConfigDict(strict=True, extra="forbid")

    rank: int
    rays: List[List[int]]
    max_cones: List[List[int]]


class SurveyRun(BaseModel):
    id: int
    status: str = "PENDING"
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    updated_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    finished_at: Optional[datetime] = None
    summary: Optional[Dict[str, Any]] = None


class SurveyJob(BaseModel):
    id: int
    run_id: int
    label: str
    fan_text: str
    images: int = 0
    seed: int = 0
    status: str = "PENDING"
    verdict: Optional[str] = None
    split_tangent_consistent: Optional[bool] = None
    image_disagreements: int = 0
    attempts: int = 0
    last_error: Optional[str] = None
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    updated_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
