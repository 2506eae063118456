"""Verification reports shared by all pipelines."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .chains import Group, Homology

REPORT_VERSION = 1


class HypothesisError(ValueError):
    """Input lies outside the hypothesis under which a check is meaningful."""


@dataclass
class Report:
    """PASS/FAIL comparison of two graded groups, with optional extra data."""

    check: str
    left: Homology
    right: Homology
    left_name: str = "computed"
    right_name: str = "predicted"
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def witnesses(self) -> list[tuple[int, Group, Group]]:
        n = max(len(self.left.groups), len(self.right.groups))
        return [(k, self.left[k], self.right[k]) for k in range(n) if self.left[k] != self.right[k]]

    @property
    def ok(self) -> bool:
        return not self.witnesses and not self.failures

    @property
    def status(self) -> str:
        return "PASS" if self.ok else "FAIL"

    def __bool__(self) -> bool:
        return self.ok

    def table(self) -> list[dict]:
        n = max(len(self.left.groups), len(self.right.groups))
        return [
            {
                "degree": k,
                self.left_name: self.left[k].to_json(),
                self.right_name: self.right[k].to_json(),
                "match": self.left[k] == self.right[k],
            }
            for k in range(n)
        ]

    def to_json(self) -> dict:
        out = {
            "report_version": REPORT_VERSION,
            "check": self.check,
            "status": self.status,
            "degrees": self.table(),
            "witnesses": [
                {"degree": k, self.left_name: str(a), self.right_name: str(b)}
                for k, a, b in self.witnesses
            ],
        }
        if self.failures:
            out["failures"] = [str(f) for f in self.failures]
        if self.notes:
            out["notes"] = list(self.notes)
        if self.extra:
            out.update(self.extra)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False)

    def summary(self) -> str:
        line = f"{self.check}: {self.status}  {self.left_name}: {self.left}  {self.right_name}: {self.right}"
        for k, a, b in self.witnesses:
            line += f"\n  degree {k}: {a} vs {b}"
        return line
