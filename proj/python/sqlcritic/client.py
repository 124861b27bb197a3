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


"""Trainer-side HTTP client for the scoring service."""

import json
import urllib.error
import urllib.request
from typing import Dict, List, Optional, Sequence

from .wire import GroupAdvantages, ScoreRequest, ScoreResponse


class ServiceError(RuntimeError):
    def __init__(self, status: int, message: str):
        super().__init__(f"HTTP {status}: {message}")
        self.status = status


class RewardClient:
    def __init__(self, base_url: str, timeout: float = 60.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def _call(self, method: str, path: str, body: Optional[dict] = None) -> dict:
        data = None if body is None else json.dumps(body).encode()
        req = urllib.request.Request(self.base_url + path, data=data, method=method,
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return json.loads(resp.read())
        except urllib.error.HTTPError as e:
            raise ServiceError(e.code, e.read().decode(errors="replace")) from None

    def health(self) -> dict:
        return self._call("GET", "/health")

    def score(self, request: ScoreRequest) -> ScoreResponse:
        return ScoreResponse.from_json(self._call("POST", "/v1/score", request.to_json()))

    def advantages(self, groups: Dict[str, Sequence[float]], normalize_std: bool = True,
                   std_floor: Optional[float] = None) -> List[GroupAdvantages]:
        body: dict = {"groups": [{"group_id": g, "rewards": list(r)} for g, r in groups.items()],
                      "normalize_std": normalize_std}
        if std_floor is not None:
            body["std_floor"] = std_floor
        out = self._call("POST", "/v1/advantages", body)
        return [GroupAdvantages(g["group_id"], g["advantages"]) for g in out["groups"]]
