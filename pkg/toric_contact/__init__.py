"""Exact toric geometry for deciding which smooth projective toric varieties are contact."""
from .builders import (
    fan_hirzebruch,
    fan_p1_power,
    fan_projective_space,
    fan_projectivized_split_bundle,
    fan_projectivized_tangent_p1_power,
    product_fan,
)
from .classify import classify_contact, fan_isomorphic, has_split_tangent, is_p1_power
from .fan import is_complete, is_projective, is_smooth, validate, walls
from .fanfile import parse_fan, serialize_fan
from .models import Fan

__all__ = [
    "Fan",
    "classify_contact",
    "fan_hirzebruch",
    "fan_isomorphic",
    "fan_p1_power",
    "fan_projective_space",
    "fan_projectivized_split_bundle",
    "fan_projectivized_tangent_p1_power",
    "has_split_tangent",
    "is_complete",
    "is_p1_power",
    "is_projective",
    "is_smooth",
    "parse_fan",
    "product_fan",
    "serialize_fan",
    "validate",
    "walls",
]
