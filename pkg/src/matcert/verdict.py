"""Machine-checkable verdicts and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

CERTIFIED = "certified"
REJECTED = "rejected"
INPUT_ERROR = "input-error"

EXIT_CODES = {CERTIFIED: 0, REJECTED: 1, INPUT_ERROR: 2}


@dataclass
class Verdict:
    status: str
    claim: str  # "termination" or "complexity"
    degree: int | None = None
    criterion: str = "none"  # "triangular", "spectral" or "none"
    witnesses: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    oracle: dict[str, Any] | None = None

    def __post_init__(self):
        if self.status not in EXIT_CODES:
            raise ValueError(f"unknown verdict status {self.status!r}")
        if self.status == REJECTED and not self.witnesses:
            raise ValueError("a rejected verdict needs at least one witness")

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def __bool__(self):
        return self.certified

    def to_dict(self) -> dict:
        d = {
            "status": self.status,
            "claim": self.claim,
            "degree": self.degree,
            "criterion": self.criterion,
            "witnesses": list(self.witnesses),
            "details": self.details,
        }
        if self.oracle is not None:
            d["oracle"] = self.oracle
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Verdict:
        return cls(
            status=d["status"],
            claim=d["claim"],
            degree=d.get("degree"),
            criterion=d.get("criterion", "none"),
            witnesses=list(d.get("witnesses", [])),
            details=dict(d.get("details", {})),
            oracle=d.get("oracle"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Verdict:
        return cls.from_dict(json.loads(text))
