"""Run configuration and deterministic JSON reports."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

from .algebra import Convention


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-10
    nu_re: float = 1.0
    nu_im: float = 0.0
    epsilon: int = 1
    convention: str = "PLUS"
    seed: int = 42
    samples: int = 1000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        Convention(self.convention)
        if self.nu_re == 0 and self.nu_im == 0:
            raise ValueError("nu must be non-zero")

    @property
    def nu(self) -> complex:
        return complex(self.nu_re, self.nu_im)

    # identities that hold to rounding error are checked a factor 100 tighter,
    # long optical products a factor 10 looser
    @property
    def strict(self) -> float:
        return self.tolerance / 100

    @property
    def loose(self) -> float:
        return self.tolerance * 10

    @classmethod
    def from_mapping(cls, doc: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**doc)


@dataclass(frozen=True)
class Record:
    """One check. ``comparison`` says how ``residual`` is judged against ``tolerance``.

    ``le``: residual <= tolerance. ``gt``: residual > tolerance, used for
    negative controls and for findings (a quoted formula that is confirmed not
    to hold).
    """

    name: str
    residual: float
    tolerance: float
    comparison: str = "le"
    kind: str = "check"
    note: str = ""

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.residual):
            return False
        if self.comparison == "le":
            return self.residual <= self.tolerance
        if self.comparison == "gt":
            return self.residual > self.tolerance
        raise ValueError(f"unknown comparison {self.comparison!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        if not d["note"]:
            del d["note"]
        return d


@dataclass
class ReportDocument:
    suite: str
    config: RunConfig
    records: list[Record] = field(default_factory=list)
    wall_time: float | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, *records: Record) -> None:
        self.records.extend(records)

    def to_dict(self) -> dict:
        recs = sorted(self.records, key=lambda r: r.name)
        doc = {
            "suite": self.suite,
            "config": asdict(self.config),
            "records": [r.to_dict() for r in recs],
            "n_records": len(recs),
            "n_failed": sum(not r.passed for r in recs),
            "pass": self.passed,
        }
        if self.wall_time is not None:
            doc["wall_time_s"] = self.wall_time
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
