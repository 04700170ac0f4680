"""Paired dataset generation and the benchmark harness."""

from .bench import BenchReport, compare_pair, default_queries, run_bench
from .generator import GenConfig, GenReport, build_pair, generate

__all__ = [
    "BenchReport",
    "compare_pair",
    "default_queries",
    "run_bench",
    "GenConfig",
    "GenReport",
    "build_pair",
    "generate",
]
