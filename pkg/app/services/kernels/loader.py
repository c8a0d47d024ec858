"""Reading and writing the kernel JSON format.

``{"labels": [...]?, "mu": ["1/2", "1/2"], "w": [["2", "1"], ["1", "0"]], "symmetric": true}``

Zero-mass types are invisible to every quantity computed from a kernel, so
they are dropped here (with a warning) before the kernel is constructed.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from pydantic import ValidationError

from app.errors import KernelError
from app.models.kernel_document import KernelDocument
from app.services.kernels.step_kernel import StepAkernel, StepKernel

logger = logging.getLogger(__name__)


def format_rational(value: Fraction) -> Union[int, str]:
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _parse_rational(value: Union[int, str], where: str) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise KernelError(f"{where}: {value!r} is not a rational number") from exc


def kernel_from_document(document: KernelDocument) -> StepAkernel:
    """Validate *document* and build the kernel it describes."""
    mu = [_parse_rational(m, f"mu[{i}]") for i, m in enumerate(document.mu)]
    w = [
        [_parse_rational(x, f"w[{i}][{j}]") for j, x in enumerate(row)]
        for i, row in enumerate(document.w)
    ]
    if len(w) != len(mu):
        raise KernelError(f"w has {len(w)} rows but mu has {len(mu)} entries")

    for i, m in enumerate(mu):
        if m < 0:
            raise KernelError(f"mu[{i}] = {m} is negative")
    keep = [i for i, m in enumerate(mu) if m > 0]
    if len(keep) < len(mu):
        logger.warning(
            "Dropping zero-mass types",
            extra={"dropped": [i for i in range(len(mu)) if i not in keep]},
        )
    for i, row in enumerate(w):
        if len(row) != len(mu):
            raise KernelError(f"w[{i}] has {len(row)} entries, expected {len(mu)}")
        for j, x in enumerate(row):
            if x < 0:
                raise KernelError(f"w[{i}][{j}] = {x} is negative")

    labels = None
    if document.labels is not None:
        if len(document.labels) != len(mu):
            raise KernelError(f"{len(document.labels)} labels for {len(mu)} types")
        labels = tuple(document.labels[i] for i in keep)

    cls = StepKernel if document.symmetric else StepAkernel
    return cls(
        tuple(mu[i] for i in keep),
        tuple(tuple(w[i][j] for j in keep) for i in keep),
        labels,
    )


def parse_kernel(data: Any) -> StepAkernel:
    """Build a kernel from already-decoded JSON data."""
    try:
        document = KernelDocument.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise KernelError(f"invalid kernel field {location or '<root>'}: {first['msg']}") from exc
    return kernel_from_document(document)


def load_kernel(path: Union[str, Path]) -> StepAkernel:
    """Read a kernel JSON file; decoding errors report line and column."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KernelError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_kernel(data)


def dump_kernel(kernel: StepAkernel) -> dict[str, Any]:
    """JSON-ready dict for *kernel*."""
    data: dict[str, Any] = {
        "mu": [format_rational(m) for m in kernel.mu],
        "w": [[format_rational(x) for x in row] for row in kernel.w],
        "symmetric": isinstance(kernel, StepKernel),
    }
    if kernel.labels is not None:
        data["labels"] = list(kernel.labels)
    return data
