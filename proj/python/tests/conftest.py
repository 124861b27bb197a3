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


import json
import sqlite3

import pytest

import sqlcritic

CRITIQUE_FALSE = """<think>
1. Did I filter on the triple bond type correctly?
- No, the query compares bond_type to 'triple' but triple bonds are stored as '#'.
2. Did I return the bond ids?
- Yes, the query selects bond_id.
</think>
<result> False </result>
<correctedSQL>SELECT bond_id FROM bond WHERE bond_type = '#'</correctedSQL>
"""

CRITIQUE_TRUE = """<think>
1. Did I select the bond ids?
- Yes, the query selects bond_id.
</think>
<result> True </result>
"""


@pytest.fixture()
def db_root(tmp_path):
    d = tmp_path / "toxicology"
    d.mkdir()
    con = sqlite3.connect(d / "toxicology.sqlite")
    con.execute("CREATE TABLE bond (bond_id TEXT, bond_type TEXT)")
    con.executemany("INSERT INTO bond VALUES (?, ?)",
                    [("b1", "-"), ("b2", "#"), ("b3", "="), ("b4", "#")])
    con.commit()
    con.close()
    return tmp_path


def make_sample(sample_id, critique, label, predicted="SELECT bond_id FROM bond WHERE bond_type = 'triple'"):
    return {
        "sample_id": sample_id,
        "question": "List the bonds that are triple bonds.",
        "schema_text": "CREATE TABLE bond (bond_id TEXT, bond_type TEXT);",
        "predicted_sql": predicted,
        "gold_sql": "SELECT bond_id FROM bond WHERE bond_type = '#'",
        "label": label,
        "db_id": "toxicology",
        "hardness": "easy",
        "critique_text": critique,
    }


@pytest.fixture()
def samples():
    return [make_sample("s1", CRITIQUE_FALSE, False), make_sample("s2", CRITIQUE_TRUE, False),
            make_sample("s3", CRITIQUE_TRUE, True, "SELECT bond_id FROM bond WHERE bond_type = '#'")]


@pytest.fixture()
def server(db_root):
    srv = sqlcritic.Server(json.dumps({"db_root": str(db_root)}))
    port = srv.start("127.0.0.1", 0)
    yield f"http://127.0.0.1:{port}"
    srv.stop()
