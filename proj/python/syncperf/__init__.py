# SPDX-License-Identifier: Apache-2.0
"""GPU synchronization cost model and micro-benchmark analysis."""

from ._core import (
    Error,
    emulate,
    instruction_latency,
    launch_overhead,
    little_law_concurrency,
    normalize_measurements,
    predict,
    recommend_barrier,
    recommend_reduction,
    run_cli,
    switch_points,
)

__all__ = [
    "Error",
    "emulate",
    "instruction_latency",
    "launch_overhead",
    "little_law_concurrency",
    "normalize_measurements",
    "predict",
    "recommend_barrier",
    "recommend_reduction",
    "run_cli",
    "switch_points",
]
