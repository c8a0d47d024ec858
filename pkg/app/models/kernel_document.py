from typing import List, Optional, Union

from pydantic import BaseModel, Field, StrictInt, field_validator

RationalField = Union[StrictInt, str]


class KernelDocument(BaseModel):
    """On-disk / on-the-wire step kernel.

    Rationals are ``"p/q"`` (or decimal) strings or JSON integers; JSON floats
    are rejected so that every value is exact.
    """

    labels: Optional[List[str]] = None
    mu: List[RationalField] = Field(..., min_length=1)
    w: List[List[RationalField]] = Field(..., min_length=1)
    symmetric: bool = True

    @field_validator("mu", "w", mode="before")
    @classmethod
    def _reject_floats(cls, value):
        def walk(item):
            if isinstance(item, float):
                raise ValueError(f"{item!r} is a float; write rationals as \"p/q\" strings")
            if isinstance(item, list):
                for inner in item:
                    walk(inner)

        walk(value)
        return value
