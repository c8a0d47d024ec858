from typing import Any, Dict, Optional

from pydantic import BaseModel


class RunReport(BaseModel):
    """Everything needed to reproduce a command-line run.

    ``inputs`` maps each input file to the SHA-256 of its bytes; ``command``
    echoes every flag that can change ``results``.
    """

    command: Dict[str, Any]
    inputs: Dict[str, str] = {}
    seed: Optional[int] = None
    results: Dict[str, Any]
    wall_time: Optional[float] = None
