"""Machine-readable command reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import json

from .linalg import format_scalar

SCHEMA_VERSION = 1


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, tuple):
        return list(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"{type(value).__name__} is not serializable in a report")


@dataclass
class Report:
    """
    One command run: the echoed command line, the verdicts and optional timings.

    Timings are kept out of the document unless requested so that reruns produce identical bytes.
    """

    command: str
    argv: List[str]
    verdicts: Dict[str, Any] = field(default_factory=dict)
    timings: Optional[Dict[str, float]] = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "schema_version": self.schema_version,
            "command": self.command,
            "argv": list(self.argv),
            "verdicts": self.verdicts,
        }
        if self.timings is not None:
            doc["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=_default, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def write(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")
