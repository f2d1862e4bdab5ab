"""Sparse resource field over the unbounded 2-D integer lattice."""

import csv

LatticePoint = tuple[int, int]

ORIGIN: LatticePoint = (0, 0)


class InterestSpace:
    """Per-cell resource counts, stored sparsely.

    Only cells with a positive count are kept, so memory scales with the
    number of active sites rather than the lattice extent.  Counts only
    ever increase within a session; ``counts`` is public for fast reads
    but must be mutated through :meth:`deposit`.
    """

    def __init__(self):
        self.counts: dict[LatticePoint, int] = {}

    def count(self, cell: LatticePoint) -> int:
        return self.counts.get(cell, 0)

    def deposit(self, cell: LatticePoint) -> None:
        """Add one resource unit at ``cell``."""
        self.counts[cell] = self.counts.get(cell, 0) + 1

    @property
    def n_active(self) -> int:
        """Number of cells holding at least one resource unit."""
        return len(self.counts)

    def active_cells(self):
        return self.counts.keys()

    def write_csv(self, fh) -> None:
        """Dump active sites as ``x,y,count`` rows, sorted for determinism."""
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "count"])
        for (x, y), c in sorted(self.counts.items()):
            writer.writerow([x, y, c])
