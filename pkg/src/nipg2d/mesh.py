"""Piecewise-uniform boundary-layer meshes on the unit square.

The mesh is the tensor product of two one-dimensional two-band grids: in
each direction a transition point lambda = min(1/2, sigma*eps*ln(N)/beta)
splits [0, 1] into a coarse band [0, 1-lambda] and a fine band [1-lambda, 1],
each divided into N/2 equal cells.  The fine bands resolve the exponential
outflow layers at x = 1 and y = 1 of a convection-diffusion problem whose
convection field has componentwise positive lower bounds (beta1, beta2).

Element numbering runs bottom-to-top then left-to-right: element (i, j)
(column i, row j) has index i*N + j.

Mesh edges are open segments classified into four families that drive the
interior-penalty weights:

* M1 -- long edges inside the coarse region [0, 1-lambda_x) x [0, 1-lambda_y),
  penalty 1;
* M2 -- long edges inside the two layer strips, penalty N^2;
* M3 -- all short edges (strips and the corner patch), penalty N;
* M4 -- long edges lying on the transition lines x = 1-lambda_x or
  y = 1-lambda_y, penalty N.

"Long" means the edge length equals the coarse spacing 2(1-lambda)/N in the
edge's own direction; equivalently, the cell band the edge spans is coarse.
Boundary edges are classified by the same geometric rule as interior ones.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np


class RegionTag(Enum):
    """Quadrant of the tensor mesh an element belongs to."""

    OMEGA11 = "coarse-coarse"
    OMEGA12 = "x-fine"
    OMEGA21 = "y-fine"
    OMEGA22 = "corner"


class EdgeType(Enum):
    """Penalty family of a mesh edge."""

    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"


def penalty_weight(edge_type, n):
    """Penalty parameter rho for an edge family on an N x N mesh."""
    if edge_type is EdgeType.M1:
        return 1.0
    if edge_type is EdgeType.M2:
        return float(n) ** 2
    return float(n)


@dataclass(frozen=True)
class MeshConfig:
    """Parameters defining a boundary-layer mesh.

    Attributes
    ----------
    n : int
        Cells per direction; even and >= 8.
    eps : float
        Singular perturbation parameter, 0 < eps <= 1.
    sigma : float
        Transition-point constant (larger sigma widens the fine bands).
    beta1, beta2 : float
        Positive componentwise lower bounds of the convection field,
        entering the transition points in the x and y direction.
    """

    n: int
    eps: float
    sigma: float
    beta1: float
    beta2: float


@dataclass
class ShishkinMesh:
    """Tensor-product two-band mesh; treat as immutable once built.

    Attributes
    ----------
    config : MeshConfig
    lambda_x, lambda_y : float
        Transition points, in (0, 1/2].
    x_pts, y_pts : ndarray, shape (N+1,)
        Strictly increasing mesh lines from 0 to 1.
    h_x, h_y : ndarray, shape (N,)
        Cell widths per column / row.
    """

    config: MeshConfig
    lambda_x: float
    lambda_y: float
    x_pts: np.ndarray
    y_pts: np.ndarray
    h_x: np.ndarray
    h_y: np.ndarray

    @property
    def n(self):
        return self.config.n

    @property
    def n_elements(self):
        return self.config.n ** 2

    def element_index(self, i, j):
        """Flat index of element in column i, row j (bottom-to-top,
        left-to-right numbering)."""
        return i * self.config.n + j

    def element_ij(self, idx):
        """Inverse of :meth:`element_index`."""
        return divmod(idx, self.config.n)

    def cell_bounds(self, i, j):
        """Physical bounds (x0, x1, y0, y1) of element (i, j)."""
        return (self.x_pts[i], self.x_pts[i + 1],
                self.y_pts[j], self.y_pts[j + 1])


def _band_points(lam, n):
    """One-dimensional two-band grid: N/2 equal cells on [0, 1-lam] and
    N/2 equal cells on [1-lam, 1]."""
    half = n // 2
    i = np.arange(n + 1, dtype=float)
    pts = np.where(
        i <= half,
        2.0 * (1.0 - lam) * i / n,
        1.0 - lam + 2.0 * lam * (i - half) / n,
    )
    pts[0] = 0.0
    pts[half] = 1.0 - lam
    pts[n] = 1.0
    return pts


def build_mesh(config):
    """Build the two-band mesh described by ``config``.

    Raises
    ------
    ValueError
        If N is odd or < 8, or eps/sigma/beta1/beta2 are not positive.

    Warns
    -----
    UserWarning
        If eps > 1/N, outside the singularly perturbed regime the mesh
        is designed for (the mesh is still built).
    """
    n, eps = config.n, config.eps
    if n < 8 or n % 2 != 0:
        raise ValueError(f"mesh needs an even cell count N >= 8, got N={n}")
    return _build_unchecked(config)


def _build_unchecked(config):
    """Build without the N-bound check (used by small oracle problems);
    all positivity checks and geometric invariants still apply."""
    n, eps, sigma = config.n, config.eps, config.sigma
    beta1, beta2 = config.beta1, config.beta2
    if n < 2 or n % 2 != 0:
        raise ValueError(f"cell count must be even and >= 2, got N={n}")
    if eps <= 0:
        raise ValueError(f"perturbation parameter must be positive, got eps={eps}")
    if sigma <= 0:
        raise ValueError(f"transition constant must be positive, got sigma={sigma}")
    if beta1 <= 0 or beta2 <= 0:
        raise ValueError(
            f"convection lower bounds must be positive, got ({beta1}, {beta2})")
    if eps > 1.0 / n:
        warnings.warn(
            f"eps={eps} exceeds 1/N={1.0 / n}; the two-band mesh targets the "
            "layer-dominated regime eps <= 1/N", UserWarning, stacklevel=2)

    lam_x = min(0.5, sigma * eps * math.log(n) / beta1)
    lam_y = min(0.5, sigma * eps * math.log(n) / beta2)
    x_pts = _band_points(lam_x, n)
    y_pts = _band_points(lam_y, n)
    for pts in (x_pts, y_pts):
        pts.flags.writeable = False
    h_x = np.diff(x_pts)
    h_y = np.diff(y_pts)
    h_x.flags.writeable = False
    h_y.flags.writeable = False
    return ShishkinMesh(config, lam_x, lam_y, x_pts, y_pts, h_x, h_y)


def region_of(mesh, i, j):
    """Region tag of element (i, j): the coarse-coarse quadrant, one of the
    two layer strips, or the corner patch."""
    n = mesh.config.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"element ({i}, {j}) outside a {n} x {n} mesh")
    half = n // 2
    if i < half:
        return RegionTag.OMEGA11 if j < half else RegionTag.OMEGA21
    return RegionTag.OMEGA12 if j < half else RegionTag.OMEGA22


@dataclass(frozen=True)
class Edge:
    """One mesh edge (an open segment between two mesh nodes).

    Attributes
    ----------
    orientation : str
        "v" for vertical edges (constant x), "h" for horizontal.
    line : int
        Index of the mesh line the edge lies on (0..N), transverse to the
        edge direction.
    cell : int
        Index of the cell band the edge spans along its own direction
        (0..N-1).
    endpoints : tuple
        ((x0, y0), (x1, y1)) with the second point larger in the running
        coordinate.
    length : float
    plus_elem : int
        Flat index of the element whose trace is the "plus" side; for
        boundary edges, the single adjacent element.
    minus_elem : int or None
        Flat index of the "minus" element; None on the boundary.
    normal : tuple
        Unit normal nu = (nx, ny) fixing the jump/average orientation;
        it points from the plus side toward the minus side, and outward
        on the boundary.
    edge_type : EdgeType
    rho : float
        Interior-penalty weight of the edge.
    """

    orientation: str
    line: int
    cell: int
    endpoints: tuple
    length: float
    plus_elem: int
    minus_elem: int | None
    normal: tuple
    edge_type: EdgeType
    rho: float

    @property
    def is_boundary(self):
        return self.minus_elem is None


def _edge_family(line, cell, half):
    """Family of an edge on transverse line ``line`` spanning cell band
    ``cell``; symmetric in the two orientations."""
    long = cell < half  # the band spanned along the edge is coarse
    if line == half:
        return EdgeType.M4 if long else EdgeType.M3
    if not long:
        return EdgeType.M3
    return EdgeType.M1 if line < half else EdgeType.M2


def classify_edges(mesh, numbering="standard"):
    """Enumerate all mesh edges with families, penalties and trace sides.

    Parameters
    ----------
    mesh : ShishkinMesh
    numbering : {"standard", "reversed"}
        "standard" makes the higher-numbered adjacent element the plus
        side of every interior edge (normals (-1, 0) and (0, -1));
        "reversed" swaps plus/minus and flips the interior normals.  The
        assembled scheme is invariant under this choice; the option exists
        to let tests check that.

    Returns
    -------
    list of Edge
        Deterministic order: horizontal edges sorted by (line, cell), then
        vertical edges sorted by (line, cell).
    """
    if numbering not in ("standard", "reversed"):
        raise ValueError(f"unknown numbering convention: {numbering!r}")
    flip = numbering == "reversed"
    n = mesh.config.n
    half = n // 2
    edges = []

    # horizontal edges: on y-line j, spanning x-cell i
    for j in range(n + 1):
        for i in range(n):
            etype = _edge_family(j, i, half)
            rho = penalty_weight(etype, n)
            x0, x1 = mesh.x_pts[i], mesh.x_pts[i + 1]
            y = mesh.y_pts[j]
            ends = ((x0, y), (x1, y))
            if j == 0:
                plus, minus, normal = mesh.element_index(i, 0), None, (0.0, -1.0)
            elif j == n:
                plus, minus, normal = mesh.element_index(i, n - 1), None, (0.0, 1.0)
            else:
                upper = mesh.element_index(i, j)
                lower = mesh.element_index(i, j - 1)
                if flip:
                    plus, minus, normal = lower, upper, (0.0, 1.0)
                else:
                    plus, minus, normal = upper, lower, (0.0, -1.0)
            edges.append(Edge("h", j, i, ends, x1 - x0, plus, minus,
                              normal, etype, rho))

    # vertical edges: on x-line i, spanning y-cell j
    for i in range(n + 1):
        for j in range(n):
            etype = _edge_family(i, j, half)
            rho = penalty_weight(etype, n)
            y0, y1 = mesh.y_pts[j], mesh.y_pts[j + 1]
            x = mesh.x_pts[i]
            ends = ((x, y0), (x, y1))
            if i == 0:
                plus, minus, normal = mesh.element_index(0, j), None, (-1.0, 0.0)
            elif i == n:
                plus, minus, normal = mesh.element_index(n - 1, j), None, (1.0, 0.0)
            else:
                right = mesh.element_index(i, j)
                left = mesh.element_index(i - 1, j)
                if flip:
                    plus, minus, normal = left, right, (1.0, 0.0)
                else:
                    plus, minus, normal = right, left, (-1.0, 0.0)
            edges.append(Edge("v", i, j, ends, y1 - y0, plus, minus,
                              normal, etype, rho))
    return edges
