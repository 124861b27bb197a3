#
# Copyright 2026 The sqlcritic Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#


"""JSON shapes exchanged with the scoring service."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

_BREAKDOWN_KEYS = (
    "r_format", "r_out", "r_rubric", "r_cons", "r_verify", "gamma_s", "gamma_d",
    "total", "n_steps", "rubric_flags_error", "inference_only",
)


@dataclass
class ScoreRequest:
    samples: List[Dict[str, Any]]
    mode: Any = None  # variant name or {"variant", "coefficients", "outcome_source"}
    judge: str = "stub"
    group_id: Optional[str] = None
    require_label: bool = True

    def to_json(self) -> Dict[str, Any]:
        if not self.samples:
            raise ValueError("a score request needs at least one sample")
        body: Dict[str, Any] = {"samples": list(self.samples), "judge": self.judge,
                                "require_label": self.require_label}
        if self.mode is not None:
            body["mode"] = self.mode
        if self.group_id is not None:
            body["group_id"] = self.group_id
        return body


@dataclass
class Breakdown:
    r_format: int
    r_out: Optional[int]
    r_rubric: Optional[float]
    r_cons: int
    r_verify: Optional[int]
    gamma_s: float
    gamma_d: int
    total: Optional[float]
    n_steps: int
    rubric_flags_error: bool
    inference_only: bool
    mode: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_json(cls, j: Dict[str, Any]) -> "Breakdown":
        return cls(**{k: j[k] for k in _BREAKDOWN_KEYS}, mode=dict(j.get("mode", {})))


@dataclass
class SampleResult:
    sample_id: str
    ok: bool
    breakdown: Optional[Breakdown]
    verdict: Optional[bool]
    diagnostics: List[str]
    error_code: Optional[str] = None
    error_message: str = ""

    @classmethod
    def from_json(cls, j: Dict[str, Any]) -> "SampleResult":
        err = j.get("error") or {}
        b = j.get("breakdown")
        return cls(
            sample_id=j["sample_id"],
            ok=bool(j["ok"]),
            breakdown=Breakdown.from_json(b) if b else None,
            verdict=j.get("verdict"),
            diagnostics=list(j.get("diagnostics", [])),
            error_code=err.get("code"),
            error_message=err.get("message", ""),
        )


@dataclass
class ScoreResponse:
    results: List[SampleResult]
    group_id: Optional[str] = None
    advantages: Optional[List[float]] = None
    advantages_error: Optional[str] = None
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def rewards(self) -> List[Optional[float]]:
        return [r.breakdown.total if r.breakdown else None for r in self.results]

    @classmethod
    def from_json(cls, j: Dict[str, Any]) -> "ScoreResponse":
        return cls(
            results=[SampleResult.from_json(r) for r in j["results"]],
            group_id=j.get("group_id"),
            advantages=j.get("advantages"),
            advantages_error=j.get("advantages_error"),
            timing=dict(j.get("timing") or {}),
        )


@dataclass
class GroupAdvantages:
    group_id: str
    advantages: List[float]
