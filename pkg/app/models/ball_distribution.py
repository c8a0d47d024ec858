from typing import Dict

from pydantic import BaseModel, Field, model_validator

# Slack for floating-point sums of probabilities.
_MASS_TOLERANCE = 1e-9


class BallDistribution(BaseModel):
    """Law (or empirical frequencies) of the depth-``depth`` ball over canonical tree codes.

    ``residual`` is the mass not covered by ``entries``: trees outside the
    enumeration bounds for exact laws, truncated samples for empirical ones.
    """

    depth: int = Field(..., ge=0)
    entries: Dict[str, float] = {}
    residual: float = 0.0

    @model_validator(mode="after")
    def _check_mass(self) -> "BallDistribution":
        if any(p < 0 for p in self.entries.values()):
            raise ValueError("ball probabilities must be nonnegative")
        if self.residual < -_MASS_TOLERANCE:
            raise ValueError(f"residual {self.residual} is negative")
        total = sum(self.entries.values()) + self.residual
        if abs(total - 1.0) > _MASS_TOLERANCE:
            raise ValueError(f"entries and residual sum to {total}, expected 1")
        return self

    def probability(self, code: str) -> float:
        return self.entries.get(code, 0.0)
