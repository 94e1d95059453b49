"""
Run timing for experiment commands.
"""

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class RunTimer:
    """Wall-clock timer for a run and its named stages."""

    def __init__(self):
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None
        self.stages: Dict[str, float] = {}

    def start(self):
        self.start_time = time.perf_counter()

    def end(self):
        self.end_time = time.perf_counter()

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Accumulate the time spent inside the block under ``name``."""
        began = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - began
            self.stages[name] = self.stages.get(name, 0.0) + elapsed
            logger.debug("Stage %s took %.3f s", name, elapsed)

    def get_total_duration(self) -> float:
        if self.start_time is not None and self.end_time is not None:
            return self.end_time - self.start_time
        return 0.0

    def get_summary(self) -> Dict[str, Any]:
        return {"total_duration": self.get_total_duration(), "stage_durations": dict(self.stages)}
