"""Windowed selection history with offspring lineage.

Each record stores one human selection: the chosen bin, a snapshot of
the occupied bins at selection time, and a lineage map saying which
bins received offspring generated from which source bins during that
iteration (human update plus the emitter updates that followed it).
Lineage shares are 1/n_s per offspring, with n_s the number of
solutions generated by the source bin's update, so one source's shares
over one update sum to (offspring landed)/n_s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

BinIndex = tuple[int, int, int]
# offspring bin -> [(source bin, share), ...]
Lineage = dict[BinIndex, list[tuple[BinIndex, float]]]


class HistoryError(ValueError):
    """Raised when a selection refers to a bin outside its snapshot."""


@dataclass
class SelectionRecord:
    selected: BinIndex
    zo: tuple[BinIndex, ...]
    lineage: Lineage = field(default_factory=dict)


class SelectionHistory:
    """Ordered selection records, oldest evicted past the window."""

    def __init__(self, window_k: float = math.inf):
        if window_k != math.inf and (window_k < 0 or int(window_k) != window_k):
            raise ValueError("window_k must be a non-negative integer or inf")
        self.window_k = window_k
        self.records: list[SelectionRecord] = []

    def __len__(self) -> int:
        return len(self.records)

    @property
    def k_eff(self) -> int:
        """Effective averaging window: min(window, records held)."""
        if self.window_k == math.inf:
            return len(self.records)
        return min(int(self.window_k), len(self.records))

    def record_selection(
        self, bin_index: BinIndex, zo: list[BinIndex], lineage: Lineage | None = None
    ) -> None:
        if bin_index not in zo:
            raise HistoryError(f"selected bin {bin_index} not in occupied snapshot")
        self.records.append(
            SelectionRecord(
                selected=bin_index, zo=tuple(zo), lineage=dict(lineage or {})
            )
        )
        self._evict()

    def extend_last_lineage(self, lineage: Lineage) -> None:
        """Merge another update's lineage into the newest record.

        The emitter updates that run after a human selection attribute
        their offspring to this record, so backward credit can reach
        bins the emitter chose during the same iteration.
        """
        if not self.records:
            return
        target = self.records[-1].lineage
        for off_bin, sources in lineage.items():
            target.setdefault(off_bin, []).extend(sources)

    def selection_counts(self) -> dict[BinIndex, int]:
        counts: dict[BinIndex, int] = {}
        for r in self.records:
            counts[r.selected] = counts.get(r.selected, 0) + 1
        return counts

    def snapshot_bins(self) -> list[BinIndex]:
        """Union of occupied-bin snapshots, in first-seen order."""
        seen: dict[BinIndex, None] = {}
        for r in self.records:
            for b in r.zo:
                seen.setdefault(b)
        return list(seen)

    def selected_bins(self) -> set[BinIndex]:
        return {r.selected for r in self.records}

    def clear(self) -> None:
        self.records.clear()

    def _evict(self) -> None:
        if self.window_k == math.inf:
            return
        excess = len(self.records) - int(self.window_k)
        if excess > 0:
            del self.records[:excess]
