# gopaf/python/gopaf/__init__.py

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

"""Alignment-free goodness-of-pronunciation scoring on CTC posteriorgrams."""

from ._gopaf import (
    GopafError,
    InfeasibleError,
    Inventory,
    Method,
    OccupancyMode,
    Posteriorgram,
    Utterance,
    Variant,
    auc_roc,
    blank_coverage,
    conditional_entropy,
    fgop,
    fgop_columns,
    forward_log_total,
    hanley_mcneil_halfwidth,
    method_name,
    occupancy,
    parse_method,
    pcc,
    poly2_regression,
    read_inventory,
    read_posteriorgram,
    score,
    score_utterance,
    write_posteriorgram,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
