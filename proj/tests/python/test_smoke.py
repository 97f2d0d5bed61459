# gopaf/tests/python/test_smoke.py

# Copyright 2026 The gopaf Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import os
import subprocess

import numpy as np
import pytest

import gopaf

ABC = gopaf.Inventory(["a", "b", "<blk>"], 2)


def running_example():
    return gopaf.Posteriorgram.from_probabilities(np.array([[0.6, 0.3, 0.1], [0.6, 0.3, 0.1]]))


def test_running_example_scores():
    post = running_example()
    utt = gopaf.Utterance([0])
    got = [gopaf.score(post, utt, 0, m, ABC) for m in (gopaf.Method.AF_S, gopaf.Method.AF_SD, gopaf.Method.AF_SDI)]
    assert got == pytest.approx([-0.271933715483642, -0.28768207245178123, -0.7339691750802004], abs=1e-12)
    assert gopaf.forward_log_total(post, [0], ABC) == pytest.approx(math.log(0.48))
    assert gopaf.conditional_entropy(post, utt, ABC) == pytest.approx(0.7356219397587946, abs=1e-12)


def test_scores_are_ordered_on_random_input():
    rng = np.random.default_rng(0)
    inv = gopaf.Inventory(["a", "b", "c", "d", "<blk>"], 4)
    for _ in range(20):
        probs = rng.uniform(0.05, 1.0, size=(12, 5))
        probs /= probs.sum(axis=1, keepdims=True)
        post = gopaf.Posteriorgram.from_probabilities(probs)
        utt = gopaf.Utterance(list(rng.integers(0, 4, size=4)))
        s = gopaf.score_utterance(post, utt, gopaf.Method.AF_S, inv)
        sd = gopaf.score_utterance(post, utt, gopaf.Method.AF_SD, inv)
        sdi = gopaf.score_utterance(post, utt, gopaf.Method.AF_SDI, inv)
        for a, b, c in zip(s, sd, sdi):
            assert 0.0 >= a >= b - 1e-12
            assert b >= c - 1e-12


def test_posteriorgram_file_round_trip(tmp_path):
    post = running_example()
    path = tmp_path / "x.gopg"
    gopaf.write_posteriorgram(path, post)
    back = gopaf.read_posteriorgram(path)
    assert back.frames == 2 and back.symbols == 3
    np.testing.assert_allclose(back.log_posteriors(), post.log_posteriors(), atol=1e-6)
    assert path.read_bytes()[:4] == b"GOPG"


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        gopaf.Posteriorgram.from_probabilities(np.array([[0.5, 0.1, 0.1]]))
    with pytest.raises(gopaf.InfeasibleError):
        gopaf.score(running_example(), gopaf.Utterance([0, 0]), 0, gopaf.Method.AF_SD, ABC)


def test_features_and_evaluation():
    post = running_example()
    vec = gopaf.fgop(post, gopaf.Utterance([0]), 0, ABC, with_occ=True)
    assert len(vec) == len(gopaf.fgop_columns(ABC, with_occ=True))
    r = gopaf.auc_roc([-3.0, -2.0, -0.1, -0.2], [True, True, False, False])
    assert r["auc"] == 1.0 and r["n_pos"] == 2
    assert gopaf.hanley_mcneil_halfwidth(0.914, 500, 500) == pytest.approx(0.018350958258443593, rel=1e-12)
    assert gopaf.pcc([1, 2, 3], [1, 2, 4]) == pytest.approx(0.9819805060619656)
    assert gopaf.poly2_regression([0, 1, 2, 3], [1, 2, 5, 10]) == pytest.approx([1.0, 0.0, 1.0])


@pytest.mark.skipif("GOPAF_CLI" not in os.environ, reason="command-line tool not built")
def test_cli_score(tmp_path):
    gopaf.write_posteriorgram(tmp_path / "u.gopg", running_example())
    (tmp_path / "inv.txt").write_text("a\nb\n<blk> blank\n")
    (tmp_path / "m.jsonl").write_text(
        json.dumps({"utt_id": "u", "posteriorgram": "u.gopg", "phones": ["a"], "labels": [0]}) + "\n")
    out = subprocess.run(
        [os.environ["GOPAF_CLI"], "score", "--manifest", str(tmp_path / "m.jsonl"),
         "--inventory", str(tmp_path / "inv.txt"), "--method", "af-sdi"],
        check=True, capture_output=True, text=True).stdout
    rec = json.loads(out.splitlines()[0])
    assert rec["utt_id"] == "u" and rec["label"] == 0
    assert rec["value"] == pytest.approx(-0.7339691750802004, abs=1e-9)
