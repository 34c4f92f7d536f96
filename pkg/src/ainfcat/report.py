"""Check reports shared by every verification routine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    residuals: list = field(default_factory=list)
    window: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.residuals

    def add(self, **entry) -> None:
        self.residuals.append(entry)

    def merge(self, other: "Report") -> "Report":
        self.residuals.extend(other.residuals)
        self.checked += other.checked
        return self

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "window": self.window,
            "residuals": self.residuals,
            "info": self.info,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, default=str)

    def to_text(self) -> str:
        head = f"{self.name}: {'PASS' if self.passed else 'FAIL'} ({self.checked} cells"
        if self.window:
            head += ", " + ", ".join(f"{k}={v}" for k, v in sorted(self.window.items()))
        head += ")"
        lines = [head]
        for k, v in sorted(self.info.items()):
            lines.append(f"  {k}: {v}")
        for r in self.residuals[:20]:
            lines.append("  residual " + ", ".join(f"{k}={v}" for k, v in r.items()))
        if len(self.residuals) > 20:
            lines.append(f"  ... {len(self.residuals) - 20} more")
        return "\n".join(lines)

    def __str__(self):
        return self.to_text()
