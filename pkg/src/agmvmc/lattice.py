"""Site graphs for spin models: open chains and open rectangular grids.

Sites are numbered 0..n-1.  On a grid of shape (lx, ly) the site at row x,
column y is x*ly + y (row-major), so bonds with j = i+1 run along y and
bonds with j = i+ly run along x.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class LatticeGraph:
    """Open-boundary site graph with nearest-neighbour bonds.

    nn_bonds holds (i, j) with i < j.  nnn_bonds_row holds the (y, y+2)
    pairs within each row; empty unless the graph was built with them.
    """

    n_sites: int
    shape: tuple  # (lx, ly); a chain is (1, n)
    nn_bonds: tuple = field(default=())
    nnn_bonds_row: tuple = field(default=())

    def __post_init__(self):
        lx, ly = self.shape
        if lx < 1 or ly < 1 or lx * ly != self.n_sites:
            raise ValueError(f"shape {self.shape} inconsistent with n_sites={self.n_sites}")
        seen = set()
        for bonds in (self.nn_bonds, self.nnn_bonds_row):
            for i, j in bonds:
                if not (0 <= i < j < self.n_sites):
                    raise ValueError(f"bad bond ({i}, {j}) for n_sites={self.n_sites}")
                if (i, j) in seen:
                    raise ValueError(f"duplicate bond ({i}, {j})")
                seen.add((i, j))

    @property
    def nn_bonds_row(self):
        """Nearest-neighbour bonds along y (within a row)."""
        ly = self.shape[1]
        return tuple(b for b in self.nn_bonds if b[1] - b[0] == 1 and b[0] // ly == b[1] // ly)

    @property
    def nn_bonds_col(self):
        """Nearest-neighbour bonds along x (between rows)."""
        return tuple(b for b in self.nn_bonds if b not in set(self.nn_bonds_row))


def build_chain(n):
    """Open chain of n sites: bonds (i, i+1)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    bonds = tuple((i, i + 1) for i in range(n - 1))
    return LatticeGraph(n_sites=n, shape=(1, n), nn_bonds=bonds)


def build_square(lx, ly, with_nnn=False):
    """Open lx-by-ly grid.  with_nnn adds the (y, y+2) pairs within rows."""
    if lx < 1 or ly < 1:
        raise ValueError(f"need lx, ly >= 1, got ({lx}, {ly})")
    n = lx * ly
    site = lambda x, y: x * ly + y
    bonds = []
    for x in range(lx):
        for y in range(ly):
            if y + 1 < ly:
                bonds.append((site(x, y), site(x, y + 1)))
            if x + 1 < lx:
                bonds.append((site(x, y), site(x + 1, y)))
    nnn = []
    if with_nnn:
        for x in range(lx):
            for y in range(ly - 2):
                nnn.append((site(x, y), site(x, y + 2)))
    return LatticeGraph(n_sites=n, shape=(lx, ly), nn_bonds=tuple(sorted(bonds)),
                        nnn_bonds_row=tuple(sorted(nnn)))
