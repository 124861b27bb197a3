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


"""Reward scoring for text-to-SQL critiques.

The native core lives in ``_sqlcritic``; ``client`` talks to a running
scoring service over HTTP and ``wire`` holds the request/response shapes.
"""

import json as _json

try:
    from . import _sqlcritic as _native
except ImportError:  # build tree layout: module sits next to the package
    import _sqlcritic as _native

from .client import RewardClient, ServiceError
from .wire import (
    Breakdown,
    GroupAdvantages,
    SampleResult,
    ScoreRequest,
    ScoreResponse,
)

__version__ = _native.__version__
SqlcriticError = _native.SqlcriticError
Server = _native.Server
group_advantages = _native.group_advantages
clipped_surrogate = _native.clipped_surrogate
kl_term = _native.kl_term
auc = _native.auc
format_count_percent = _native.format_count_percent


def parse_critique(text):
    """Parsed critique as a dict: steps, verdict, corrected_sql, format info."""
    return _json.loads(_native.parse_critique_json(text))


def score(request, config=None):
    """Scores a request in-process; same response as POST /v1/score."""
    body = request.to_json() if isinstance(request, ScoreRequest) else request
    out = _native.score_json(_json.dumps(body), _json.dumps(config or {}))
    return ScoreResponse.from_json(_json.loads(out))


def default_config():
    return _json.loads(_native.default_config_json())


__all__ = [
    "Breakdown",
    "GroupAdvantages",
    "RewardClient",
    "SampleResult",
    "ScoreRequest",
    "ScoreResponse",
    "Server",
    "ServiceError",
    "SqlcriticError",
    "auc",
    "clipped_surrogate",
    "default_config",
    "format_count_percent",
    "group_advantages",
    "kl_term",
    "parse_critique",
    "score",
]
