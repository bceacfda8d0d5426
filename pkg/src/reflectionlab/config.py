"""Run-time budgets and switches."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EngineConfig:
    orbit_budget: int = 700_000        # largest orbit through E8 is 604800
    search_budget: int = 5_000_000     # stored nodes in a conjugacy search
    class_enum_cap: int = 1_000_000    # |W| above which classes are not enumerated
    threads: int = 1                   # accepted for interface parity; results never depend on it
