"""Check results and suite reports."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    status: str  # pass | fail | skip
    witness: str | None = None
    elapsed_ms: float = 0.0
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class SuiteReport:
    suite: str
    config: dict[str, Any]
    checks: list[Check] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"

    def sorted_checks(self) -> list[Check]:
        return sorted(self.checks, key=lambda c: c.name)

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        checks = []
        for c in self.sorted_checks():
            d = asdict(c)
            if not timings:
                d.pop("elapsed_ms")
            else:
                d["elapsed_ms"] = round(c.elapsed_ms, 3)
            checks.append(d)
        return {"suite": self.suite, "config": self.config, "status": self.status, "checks": checks}


def render_json(reports: list[SuiteReport], timings: bool = False) -> str:
    overall = "fail" if any(r.status == "fail" for r in reports) else "pass"
    payload = {"status": overall, "suites": [r.to_dict(timings) for r in reports]}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_text(reports: list[SuiteReport]) -> str:
    lines = []
    for r in reports:
        lines.append(f"[{r.status.upper()}] suite {r.suite}")
        for c in r.sorted_checks():
            extra = ""
            if c.detail:
                extra = "  " + ", ".join(f"{k}={v}" for k, v in sorted(c.detail.items()))
            lines.append(f"  {c.status:4s} {c.name}{extra}")
            if c.witness and c.status == "fail":
                lines.append(f"       witness: {c.witness[:300]}")
    return "\n".join(lines) + "\n"
