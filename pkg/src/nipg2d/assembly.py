"""Global assembly of the nonsymmetric interior-penalty DG scheme.

The discrete problem: find u_h in the broken space Q_k(mesh) with

    B(u_h, v) = B1(u_h, v) + B2(u_h, v) + B3(u_h, v) = L(v)   for all v,

where, with jumps [v] = v_plus - v_minus and averages <v> oriented by each
edge's normal nu (single traces on the boundary),

* B1: sum_K eps (grad u, grad v)_K
      - sum_e eps (<grad u . nu>, [v])_e + sum_e eps ([u], <grad v . nu>)_e
      + sum_e rho_e ([u], [v])_e                  (note the + sign: NIPG),
* B2: sum_K (b . grad u, v)_K
      - sum_K ((b.n) u+, v+) on the inflow boundary part of K
      - sum_K ((b.n)(u+ - u-), v+) on the interior inflow part of K,
* B3: sum_K (c u, v)_K,
* L:  sum_K (f, v)_K.

Homogeneous Dirichlet data is imposed weakly through the boundary-edge
terms above (single-trace jumps); a strong variant that eliminates the
boundary-node degrees of freedom afterwards is available for comparison.

Degrees of freedom: element (i, j) (flat index E = i*N + j) owns the
contiguous block E*(k+1)^2 + m, where m is the local nodal index of
:mod:`nipg2d.felib`.
"""

import numpy as np
from dataclasses import dataclass, field

from scipy.sparse import coo_matrix, csr_matrix

from .felib import gauss_legendre, reference_basis


class CoefficientConditionError(ValueError):
    """Raised when sampled coefficients violate the standing assumptions
    (componentwise positive convection, positive reaction measure)."""


@dataclass(frozen=True)
class DofMap:
    """Layout of the broken-space degrees of freedom.

    Attributes
    ----------
    k : int
        Polynomial degree per direction (>= 1).
    n : int
        Mesh cells per direction.
    """

    k: int
    n: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"polynomial degree must be >= 1, got k={self.k}")
        if self.n < 2:
            raise ValueError(f"cell count must be >= 2, got N={self.n}")

    @property
    def ndof_local(self):
        return (self.k + 1) ** 2

    @property
    def total_dofs(self):
        return self.n ** 2 * self.ndof_local

    def base(self, i, j):
        """First global dof of element (i, j)."""
        return (i * self.n + j) * self.ndof_local

    def element_dofs(self, i, j):
        """Global dof indices of element (i, j), shape ((k+1)^2,)."""
        b = self.base(i, j)
        return np.arange(b, b + self.ndof_local)


@dataclass(frozen=True)
class ExactSolution:
    """Reference solution bundle: ``u(x, y)`` and optionally its gradient."""

    u: object
    grad: object | None = None


@dataclass(frozen=True)
class ProblemData:
    """Coefficients of -eps Lap(u) + b . grad(u) + c u = f with u = 0 on
    the boundary of the unit square.

    All entries are callables of (x, y) accepting ndarray arguments;
    ``div_b`` is the divergence of (b1, b2).  The scheme assumes
    b1 >= beta1 > 0, b2 >= beta2 > 0 and c - div_b / 2 >= 0;
    :func:`assemble` spot-checks these at the quadrature points.
    """

    b1: object
    b2: object
    div_b: object
    c: object
    f: object
    exact: ExactSolution | None = None
    name: str = ""


@dataclass
class SparseSystem:
    """Assembled linear system with configuration metadata.

    ``metadata`` records the resolved discretization choices (N, k, eps,
    sigma, quadrature order, Dirichlet mode, penalty schedule), so any
    output derived from the system can echo its configuration.
    """

    matrix: csr_matrix
    rhs: np.ndarray
    metadata: dict = field(default_factory=dict)


@dataclass
class DGFunction:
    """A broken-space function: per-element nodal coefficients.

    Evaluation inside any element is well defined; values on mesh edges
    are double valued and exposed through :func:`trace_pair`.
    """

    mesh: object
    dofmap: DofMap
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (self.dofmap.total_dofs,):
            raise ValueError(
                f"coefficient vector has shape {self.coefficients.shape}, "
                f"expected ({self.dofmap.total_dofs},)")

    def element_coefficients(self, i, j):
        """Nodal coefficients of element (i, j), shape ((k+1)^2,)."""
        b = self.dofmap.base(i, j)
        return self.coefficients[b:b + self.dofmap.ndof_local]

    def eval_in_element(self, i, j, xi, eta):
        """Evaluate at reference coordinates (xi, eta) of element (i, j)."""
        basis = reference_basis(self.dofmap.k)
        scalar = np.isscalar(xi) and np.isscalar(eta)
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        eta = np.atleast_1d(np.asarray(eta, dtype=float))
        vals = basis.eval_2d(np.column_stack([xi.ravel(), eta.ravel()]))
        out = self.element_coefficients(i, j) @ vals
        return out.item() if scalar else out.reshape(xi.shape)

    def eval(self, x, y):
        """Evaluate at physical points; points on an interior mesh line
        take the trace of the element to the right/above."""
        scalar = np.isscalar(x) and np.isscalar(y)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        mesh = self.mesh
        n = mesh.config.n
        i = np.clip(np.searchsorted(mesh.x_pts, x, side="right") - 1, 0, n - 1)
        j = np.clip(np.searchsorted(mesh.y_pts, y, side="right") - 1, 0, n - 1)
        xi = 2.0 * (x - mesh.x_pts[i]) / mesh.h_x[i] - 1.0
        eta = 2.0 * (y - mesh.y_pts[j]) / mesh.h_y[j] - 1.0
        basis = reference_basis(self.dofmap.k)
        vals = basis.eval_2d(np.column_stack([xi.ravel(), eta.ravel()]))
        ndl = self.dofmap.ndof_local
        bases = (i.ravel() * n + j.ravel()) * ndl
        local = self.coefficients[bases[:, None] + np.arange(ndl)[None, :]]
        out = np.einsum("pm,mp->p", local, vals)
        return out.item() if scalar else out.reshape(x.shape)


def trace_pair(v, edge, s):
    """Two-sided traces of a :class:`DGFunction` along an edge.

    Parameters
    ----------
    v : DGFunction
    edge : nipg2d.mesh.Edge
    s : ndarray
        Running physical coordinates along the edge (y-values for a
        vertical edge, x-values for a horizontal one), inside the open
        segment.

    Returns
    -------
    (plus, minus) : pair of ndarray
        Traces from the plus and minus side; ``minus`` is None for a
        boundary edge.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    mesh = v.mesh

    def side_vals(elem):
        i, j = mesh.element_ij(elem)
        if edge.orientation == "v":
            xi = 1.0 if mesh.x_pts[i + 1] == edge.endpoints[0][0] else -1.0
            eta = 2.0 * (s - mesh.y_pts[j]) / mesh.h_y[j] - 1.0
            return v.eval_in_element(i, j, np.full_like(s, xi), eta)
        eta = 1.0 if mesh.y_pts[j + 1] == edge.endpoints[0][1] else -1.0
        xi = 2.0 * (s - mesh.x_pts[i]) / mesh.h_x[i] - 1.0
        return v.eval_in_element(i, j, xi, np.full_like(s, eta))

    plus = side_vals(edge.plus_elem)
    minus = None if edge.minus_elem is None else side_vals(edge.minus_elem)
    return plus, minus


def inflow_outflow_split(mesh, problem, i, j, nq=4):
    """Partition the sides of element (i, j) by the sign of b . n.

    Returns
    -------
    (inflow, outflow) : pair of tuples
        Side names from ("left", "bottom", "right", "top"); a side is
        inflow when b . n < 0 at every sample point, outflow when
        b . n >= 0 everywhere.

    Raises
    ------
    ValueError
        If b . n changes sign within one side.
    """
    rule = gauss_legendre(nq)
    x0, x1, y0, y1 = mesh.cell_bounds(i, j)
    xs = x0 + (rule.nodes + 1.0) * 0.5 * (x1 - x0)
    ys = y0 + (rule.nodes + 1.0) * 0.5 * (y1 - y0)
    sides = {
        "left": -np.asarray(problem.b1(np.full_like(ys, x0), ys), dtype=float),
        "right": np.asarray(problem.b1(np.full_like(ys, x1), ys), dtype=float),
        "bottom": -np.asarray(problem.b2(xs, np.full_like(xs, y0)), dtype=float),
        "top": np.asarray(problem.b2(xs, np.full_like(xs, y1)), dtype=float),
    }
    inflow, outflow = [], []
    for name in ("left", "bottom", "right", "top"):
        bn = np.broadcast_to(sides[name], (nq,))
        if np.all(bn < 0.0):
            inflow.append(name)
        elif np.all(bn >= 0.0):
            outflow.append(name)
        else:
            raise ValueError(
                f"b . n changes sign on side {name!r} of element ({i}, {j}); "
                "the upwind splitting needs a single sign per side")
    return tuple(inflow), tuple(outflow)


def _sample(fn, x, y):
    """Evaluate a coefficient callable, broadcasting constants."""
    out = np.asarray(fn(x, y), dtype=float)
    if out.shape != np.shape(x):
        out = np.broadcast_to(out, np.shape(x)).copy()
    return out


class _RefTables:
    """Reference-cell value/gradient tables shared by assembly and norms."""

    def __init__(self, k, nq):
        basis = reference_basis(k)
        rule = gauss_legendre(nq)
        self.k, self.nq = k, nq
        self.t = rule.nodes
        self.w1 = rule.weights
        pts = rule.points_2d()
        self.xi2, self.eta2 = pts[:, 0], pts[:, 1]
        self.w2 = rule.weights_2d()
        self.vals = basis.eval_2d(pts)
        self.gx, self.gy = basis.grad_2d(pts)
        ones = np.ones_like(rule.nodes)
        side_pts = {
            "L": np.column_stack([-ones, rule.nodes]),
            "R": np.column_stack([ones, rule.nodes]),
            "B": np.column_stack([rule.nodes, -ones]),
            "T": np.column_stack([rule.nodes, ones]),
        }
        self.tr = {}
        self.dxi = {}
        self.deta = {}
        for s, p in side_pts.items():
            self.tr[s] = basis.eval_2d(p)
            gx, gy = basis.grad_2d(p)
            self.dxi[s] = gx
            self.deta[s] = gy


class _TripletBuffer:
    """Accumulates COO triplets in deterministic insertion order."""

    def __init__(self):
        self.rows = []
        self.cols = []
        self.data = []

    def add_blocks(self, blocks, row_base, col_base, ndl):
        """Append dense (ne, ndl, ndl) blocks at per-item dof offsets."""
        local = np.arange(ndl)
        rows = row_base[:, None, None] + local[None, :, None]
        cols = col_base[:, None, None] + local[None, None, :]
        self.rows.append(np.broadcast_to(rows, blocks.shape).ravel())
        self.cols.append(np.broadcast_to(cols, blocks.shape).ravel())
        self.data.append(blocks.ravel())

    def to_csr(self, shape):
        rows = np.concatenate(self.rows)
        cols = np.concatenate(self.cols)
        data = np.concatenate(self.data)
        return coo_matrix((data, (rows, cols)), shape=shape).tocsr()


def _group_edges(edges):
    """Bucket an edge list into vectorizable families."""
    groups = {key: [] for key in
              ("v_int", "h_int", "left", "right", "bottom", "top")}
    for e in edges:
        if e.minus_elem is not None:
            groups["v_int" if e.orientation == "v" else "h_int"].append(e)
        elif e.orientation == "v":
            groups["left" if e.line == 0 else "right"].append(e)
        else:
            groups["bottom" if e.line == 0 else "top"].append(e)
    return groups


def _check_coefficients(problem, x, y, beta1, beta2):
    """Spot-check the standing coefficient assumptions at sample points."""
    slack = 1e-9
    b1 = _sample(problem.b1, x, y)
    b2 = _sample(problem.b2, x, y)
    c0sq = _sample(problem.c, x, y) - 0.5 * _sample(problem.div_b, x, y)
    if b1.min() < beta1 - slack or b2.min() < beta2 - slack:
        raise CoefficientConditionError(
            f"convection field drops below its declared lower bounds: "
            f"min b = ({b1.min():.6g}, {b2.min():.6g}), "
            f"declared ({beta1}, {beta2})")
    if c0sq.min() < -slack:
        raise CoefficientConditionError(
            f"c - div(b)/2 must be nonnegative; sampled minimum "
            f"{c0sq.min():.6g}")


def assemble(mesh, edges, dofmap, problem, eps, quad_order=None,
             dirichlet="weak"):
    """Assemble the NIPG matrix and load vector.

    Parameters
    ----------
    mesh : ShishkinMesh
    edges : list of Edge
        Output of :func:`nipg2d.mesh.classify_edges` (any numbering).
    dofmap : DofMap
    problem : ProblemData
    eps : float
        Diffusion parameter.
    quad_order : int, optional
        Gauss points per direction; default k + 2, minimum k + 1.
    dirichlet : {"weak", "strong"}
        Weak (default) keeps the boundary-edge terms; strong additionally
        eliminates boundary-node dofs to zero afterwards.

    Returns
    -------
    SparseSystem
    """
    n = mesh.config.n
    k = dofmap.k
    if dofmap.n != n:
        raise ValueError(f"dofmap is for N={dofmap.n}, mesh has N={n}")
    if dirichlet not in ("weak", "strong"):
        raise ValueError(f"unknown Dirichlet mode: {dirichlet!r}")
    nq = (k + 2) if quad_order is None else int(quad_order)
    if nq < k + 1:
        raise ValueError(
            f"quadrature order {nq} too low for degree {k}; need >= {k + 1}")

    tab = _RefTables(k, nq)
    ndl = dofmap.ndof_local
    buf = _TripletBuffer()

    # ---- element volumes -------------------------------------------------
    i_e = np.repeat(np.arange(n), n)       # flat element order E = i*n + j
    j_e = np.tile(np.arange(n), n)
    hx = mesh.h_x[i_e]
    hy = mesh.h_y[j_e]
    x_q = mesh.x_pts[i_e][:, None] + (tab.xi2 + 1.0) * 0.5 * hx[:, None]
    y_q = mesh.y_pts[j_e][:, None] + (tab.eta2 + 1.0) * 0.5 * hy[:, None]
    _check_coefficients(problem, x_q, y_q,
                        mesh.config.beta1, mesh.config.beta2)

    kxx = np.einsum("q,mq,nq->mn", tab.w2, tab.gx, tab.gx)
    kyy = np.einsum("q,mq,nq->mn", tab.w2, tab.gy, tab.gy)
    vol = eps * ((hy / hx)[:, None, None] * kxx
                 + (hx / hy)[:, None, None] * kyy)

    b1_q = _sample(problem.b1, x_q, y_q)
    b2_q = _sample(problem.b2, x_q, y_q)
    c_q = _sample(problem.c, x_q, y_q)
    vol += np.einsum("eq,mq,nq->emn",
                     tab.w2 * b1_q * (0.5 * hy)[:, None], tab.vals, tab.gx)
    vol += np.einsum("eq,mq,nq->emn",
                     tab.w2 * b2_q * (0.5 * hx)[:, None], tab.vals, tab.gy)
    vol += np.einsum("eq,mq,nq->emn",
                     tab.w2 * c_q * (0.25 * hx * hy)[:, None],
                     tab.vals, tab.vals)

    elem_base = np.arange(n * n) * ndl
    buf.add_blocks(vol, elem_base, elem_base, ndl)

    f_q = _sample(problem.f, x_q, y_q)
    load = np.einsum("eq,mq->em",
                     tab.w2 * f_q * (0.25 * hx * hy)[:, None], tab.vals)
    rhs = load.ravel()

    # ---- edge terms -------------------------------------------------------
    groups = _group_edges(edges)
    _assemble_interior(buf, groups["v_int"], "v", mesh, problem, eps, tab,
                       ndl, n)
    _assemble_interior(buf, groups["h_int"], "h", mesh, problem, eps, tab,
                       ndl, n)
    for side in ("left", "right", "bottom", "top"):
        _assemble_boundary(buf, groups[side], side, mesh, problem, eps, tab,
                           ndl, n)

    total = dofmap.total_dofs
    matrix = buf.to_csr((total, total))

    metadata = {
        "n": n,
        "k": k,
        "eps": eps,
        "sigma": mesh.config.sigma,
        "beta": (mesh.config.beta1, mesh.config.beta2),
        "lambda": (mesh.lambda_x, mesh.lambda_y),
        "quad_order": nq,
        "dirichlet": dirichlet,
        "boundary_edge_rule": "same-as-interior",
        "penalty_schedule": "M1:1 M2:N^2 M3:N M4:N",
        "problem": problem.name,
    }
    system = SparseSystem(matrix, rhs, metadata)
    if dirichlet == "strong":
        _eliminate_boundary_dofs(system, mesh, dofmap)
    return system


def _edge_quad_geometry(group, axis, mesh, tab):
    """Per-edge arrays (line, cell, rho, J, X, Y) for one edge family."""
    line = np.array([e.line for e in group])
    cell = np.array([e.cell for e in group])
    rho = np.array([e.rho for e in group])
    if axis == "v":
        h = mesh.h_y[cell]
        run0 = mesh.y_pts[cell]
        y = run0[:, None] + (tab.t[None, :] + 1.0) * 0.5 * h[:, None]
        x = np.broadcast_to(mesh.x_pts[line][:, None], y.shape)
    else:
        h = mesh.h_x[cell]
        run0 = mesh.x_pts[cell]
        x = run0[:, None] + (tab.t[None, :] + 1.0) * 0.5 * h[:, None]
        y = np.broadcast_to(mesh.y_pts[line][:, None], x.shape)
    return line, cell, rho, 0.5 * h, x, y


def _assemble_interior(buf, group, axis, mesh, problem, eps, tab, ndl, n):
    """Interior-edge consistency/penalty terms plus the upwind jump term."""
    if not group:
        return
    line, cell, rho, jac, x, y = _edge_quad_geometry(group, axis, mesh, tab)
    wj = tab.w1[None, :] * jac[:, None]

    if axis == "v":
        hi_elem = line * n + cell          # element on the +x side
        lo_elem = (line - 1) * n + cell
        hi_face, lo_face = "L", "R"
        h_hi, h_lo = mesh.h_x[line], mesh.h_x[line - 1]
        dtab = tab.dxi
        b_edge = _sample(problem.b1, x, y)
    else:
        hi_elem = cell * n + line          # element on the +y side
        lo_elem = cell * n + (line - 1)
        hi_face, lo_face = "B", "T"
        h_hi, h_lo = mesh.h_y[line], mesh.h_y[line - 1]
        dtab = tab.deta
        b_edge = _sample(problem.b2, x, y)

    plus = np.array([e.plus_elem for e in group])
    plus_is_hi = plus == hi_elem
    if not (np.all(plus_is_hi) or np.all(~plus_is_hi)):
        raise ValueError("mixed plus-side conventions within one edge family")
    if plus_is_hi[0]:
        nu = -1.0
        p_face, m_face = hi_face, lo_face
        p_elem, m_elem = hi_elem, lo_elem
        h_p, h_m = h_hi, h_lo
    else:
        nu = 1.0
        p_face, m_face = lo_face, hi_face
        p_elem, m_elem = lo_elem, hi_elem
        h_p, h_m = h_lo, h_hi

    sides = {
        "P": (1.0, tab.tr[p_face], dtab[p_face], nu * 2.0 / h_p, p_elem),
        "M": (-1.0, tab.tr[m_face], dtab[m_face], nu * 2.0 / h_m, m_elem),
    }
    for rname in ("P", "M"):
        s_r, tr_r, dt_r, scale_r, elem_r = sides[rname]
        for cname in ("P", "M"):
            s_c, tr_c, dt_c, scale_c, elem_c = sides[cname]
            block = -0.5 * eps * s_r * np.einsum(
                "eq,mq,nq->emn", wj * scale_c[:, None], tr_r, dt_c)
            block += 0.5 * eps * s_c * np.einsum(
                "eq,mq,nq->emn", wj * scale_r[:, None], dt_r, tr_c)
            block += s_r * s_c * np.einsum(
                "eq,mq,nq->emn", wj * rho[:, None], tr_r, tr_c)
            buf.add_blocks(block, elem_r * ndl, elem_c * ndl, ndl)

    # upwind jump term: rows on the downwind (+x / +y) element
    wb = wj * b_edge
    tr_hi, tr_lo = tab.tr[hi_face], tab.tr[lo_face]
    buf.add_blocks(np.einsum("eq,mq,nq->emn", wb, tr_hi, tr_hi),
                   hi_elem * ndl, hi_elem * ndl, ndl)
    buf.add_blocks(-np.einsum("eq,mq,nq->emn", wb, tr_hi, tr_lo),
                   hi_elem * ndl, lo_elem * ndl, ndl)


_BOUNDARY_FACE = {"left": "L", "right": "R", "bottom": "B", "top": "T"}


def _assemble_boundary(buf, group, side, mesh, problem, eps, tab, ndl, n):
    """Boundary-edge terms: single-trace consistency + penalty, and the
    inflow-boundary upwind term on the left/bottom sides."""
    if not group:
        return
    axis = "v" if side in ("left", "right") else "h"
    line, cell, rho, jac, x, y = _edge_quad_geometry(group, axis, mesh, tab)
    wj = tab.w1[None, :] * jac[:, None]
    face = _BOUNDARY_FACE[side]

    if axis == "v":
        elem = (n - 1) * n + cell if side == "right" else cell
        h_t = mesh.h_x[n - 1] if side == "right" else mesh.h_x[0]
        nu = 1.0 if side == "right" else -1.0
        dtab = tab.dxi[face]
        b_edge = _sample(problem.b1, x, y)
    else:
        elem = cell * n + (n - 1) if side == "top" else cell * n
        h_t = mesh.h_y[n - 1] if side == "top" else mesh.h_y[0]
        nu = 1.0 if side == "top" else -1.0
        dtab = tab.deta[face]
        b_edge = _sample(problem.b2, x, y)

    tr = tab.tr[face]
    scale = nu * 2.0 / h_t
    block = -eps * scale * np.einsum("eq,mq,nq->emn", wj, tr, dtab)
    block += eps * scale * np.einsum("eq,mq,nq->emn", wj, dtab, tr)
    block += np.einsum("eq,mq,nq->emn", wj * rho[:, None], tr, tr)
    if side in ("left", "bottom"):
        # inflow boundary: -(b.n) u v = +|b.n| u v
        block += np.einsum("eq,mq,nq->emn", wj * b_edge, tr, tr)
    buf.add_blocks(block, elem * ndl, elem * ndl, ndl)


def boundary_dofs(mesh, dofmap):
    """Global indices of nodal dofs sitting on the domain boundary."""
    n, k = mesh.config.n, dofmap.k
    ndl = dofmap.ndof_local
    out = []
    for i in range(n):
        for j in range(n):
            base = dofmap.base(i, j)
            for a in range(k + 1):
                for b in range(k + 1):
                    if ((i == 0 and a == 0) or (i == n - 1 and a == k)
                            or (j == 0 and b == 0) or (j == n - 1 and b == k)):
                        out.append(base + a * (k + 1) + b)
    return np.asarray(sorted(out), dtype=int)


def _eliminate_boundary_dofs(system, mesh, dofmap):
    """Strong homogeneous Dirichlet: identity rows/zero columns on
    boundary-node dofs."""
    bdofs = boundary_dofs(mesh, dofmap)
    a = system.matrix.tolil()
    a[bdofs, :] = 0.0
    a[:, bdofs] = 0.0
    for d in bdofs:
        a[d, d] = 1.0
    system.matrix = a.tocsr()
    system.rhs[bdofs] = 0.0


def export_coordinate(system, path):
    """Write the matrix in coordinate (row, col, value) text format."""
    coo = system.matrix.tocoo()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# coordinate sparse matrix\n")
        fh.write(f"# shape {coo.shape[0]} {coo.shape[1]} nnz {coo.nnz}\n")
        for r, c, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {float(v)!r}\n")


def load_coordinate(path):
    """Read a matrix written by :func:`export_coordinate`."""
    rows, cols, data = [], [], []
    shape = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                parts = line.split()
                if "shape" in parts:
                    idx = parts.index("shape")
                    shape = (int(parts[idx + 1]), int(parts[idx + 2]))
                continue
            r, c, v = line.split()
            rows.append(int(r))
            cols.append(int(c))
            data.append(float(v))
    return coo_matrix((data, (rows, cols)), shape=shape).tocsr()
