"""Check records shared by the verification batteries and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Outcome of one named check: pass/fail plus the margin by which the
    asserted inequality holds (negative margin = failure)."""

    name: str
    passed: bool
    margin: float
    inputs: dict = field(default_factory=dict)
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "check_name": self.name,
            "status": "pass" if self.passed else "fail",
            "margin": self.margin,
            "inputs": self.inputs,
            "detail": self.detail,
        }


def all_passed(results) -> bool:
    return all(r.passed for r in results)
