from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    residual: float
    tol: float
    details: dict = field(default_factory=dict)
    worst: object = None

    @property
    def passed(self):
        return bool(self.residual <= self.tol)

    def to_dict(self):
        return {
            "check": self.name,
            "passed": self.passed,
            "residual": float(self.residual),
            "tol": float(self.tol),
            "worst": None if self.worst is None else str(self.worst),
            **self.details,
        }

    def __str__(self):
        status = "ok" if self.passed else "FAILED"
        where = "" if self.worst is None else f" at {self.worst}"
        return f"{self.name}: {status} residual={self.residual:.3e} tol={self.tol:.1e}{where}"


def merge(name, reports, tol=None):
    worst = max(reports, key=lambda r: r.residual / r.tol if r.tol else r.residual, default=None)
    if worst is None:
        return Report(name, 0.0, tol or 0.0)
    failed = [r.name for r in reports if not r.passed]
    return Report(name, 0.0 if not failed else float("inf"), 0.0,
                  {"parts": [r.to_dict() for r in reports], "failed": failed})
