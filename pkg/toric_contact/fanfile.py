"""
Fan file format: one JSON object {"rank", "rays", "max_cones"} with decimal
integers of any size. The canonical serialization sorts rays
lexicographically and cones as sorted index sets, with no whitespace.
"""
import re

from pydantic import ValidationError

from .errors import FanSyntaxError, FanValidationError
from .fan import canonical_fan, validate
from .models import Fan, FanFile

_POSITION = re.compile(r"line (\d+) column (\d+)")


def _location(loc) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def load_fan(text: str) -> Fan:
    """Parse the file schema only; structural soundness is not checked."""
    try:
        data = FanFile.model_validate_json(text)
    except ValidationError as exc:
        errors = exc.errors()
        first = errors[0]
        if first["type"] == "json_invalid":
            match = _POSITION.search(first["msg"])
            if match:
                raise FanSyntaxError(first["msg"], int(match.group(1)), int(match.group(2))) from None
            raise FanSyntaxError(first["msg"]) from None
        details = "; ".join(f"{_location(e['loc'])}: {e['msg']}" for e in errors)
        raise FanSyntaxError(f"fan file does not match the schema: {details}") from None
    return Fan(
        rank=data.rank,
        rays=tuple(tuple(ray) for ray in data.rays),
        max_cones=tuple(tuple(cone) for cone in data.max_cones),
    )


def parse_fan(text: str) -> Fan:
    """A validated Fan; every structural violation is reported at once."""
    fan = load_fan(text)
    report = validate(fan)
    if not report.is_valid:
        raise FanValidationError(report)
    return fan


def serialize_fan(fan: Fan) -> str:
    canonical = canonical_fan(fan)
    return FanFile(
        rank=canonical.rank,
        rays=[list(ray) for ray in canonical.rays],
        max_cones=[list(cone) for cone in canonical.max_cones],
    ).model_dump_json()
