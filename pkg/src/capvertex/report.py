"""Pass/fail reports produced by the verification commands."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


@dataclass
class Report:
    check: str
    params: dict
    status: str
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @classmethod
    def build(cls, check: str, params: dict, failures: list, wall_time: float = 0.0) -> Report:
        return cls(check, dict(params), "pass" if not failures else "fail", list(failures), wall_time)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "failures": self.failures,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        self.elapsed = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False
