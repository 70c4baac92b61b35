"""Nonsymmetric interior-penalty DG solver for singularly perturbed
convection-diffusion problems on two-band boundary-layer meshes.

Typical use::

    from nipg2d import (MeshConfig, build_mesh, classify_edges, DofMap,
                        assemble, solve, DGFunction, supercloseness_error,
                        boundary_layer_problem)

    eps, n, k = 1e-5, 16, 1
    problem = boundary_layer_problem(eps)
    grid = build_mesh(MeshConfig(n=n, eps=eps, sigma=k + 1.5,
                                 beta1=2.0, beta2=3.0))
    edges = classify_edges(grid)
    dofmap = DofMap(k=k, n=n)
    system = assemble(grid, edges, dofmap, problem, eps)
    x, report = solve(system)
    record = supercloseness_error(DGFunction(grid, dofmap, x),
                                  edges, problem, eps)
"""

from .analysis import (ErrorRecord, NormComponents, broken_l2_error,
                       convergence_rates, energy_norm, interpolate_composite,
                       interpolate_vee_global, supercloseness_error)
from .assembly import (CoefficientConditionError, DGFunction, DofMap,
                       ExactSolution, ProblemData, SparseSystem, assemble,
                       boundary_dofs, export_coordinate,
                       inflow_outflow_split, load_coordinate, trace_pair)
from .felib import (L2Projector, QuadratureRule, ReferenceBasis,
                    VeeInterpolator, eval_basis, eval_basis_grad,
                    gauss_legendre, l2_projection_local, lobatto_nodes,
                    local_mass_matrix, vee_interpolation_local)
from .mesh import (Edge, EdgeType, MeshConfig, RegionTag, ShishkinMesh,
                   build_mesh, classify_edges, penalty_weight, region_of)
from .problems import boundary_layer_problem, get_problem
from .solver import SolveReport, SolverConfig, solve

__version__ = "0.1.0"

__all__ = [
    "CoefficientConditionError", "DGFunction", "DofMap", "Edge", "EdgeType",
    "ErrorRecord", "ExactSolution", "L2Projector", "MeshConfig",
    "NormComponents", "ProblemData", "QuadratureRule", "ReferenceBasis",
    "RegionTag", "ShishkinMesh", "SolveReport", "SolverConfig",
    "SparseSystem", "VeeInterpolator", "assemble", "boundary_dofs",
    "boundary_layer_problem", "broken_l2_error", "build_mesh",
    "classify_edges", "convergence_rates", "energy_norm", "eval_basis",
    "eval_basis_grad", "export_coordinate", "gauss_legendre", "get_problem",
    "inflow_outflow_split", "interpolate_composite",
    "interpolate_vee_global", "l2_projection_local", "load_coordinate",
    "lobatto_nodes", "local_mass_matrix", "penalty_weight", "region_of",
    "solve", "supercloseness_error", "trace_pair", "vee_interpolation_local",
]
