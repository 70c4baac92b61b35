"""Command-line convergence studies.

``nipg2d study --config study.cfg [overrides]`` sweeps (k, eps, N) triples,
solves each discrete problem, measures the interpolant-distance errors and
their observed orders, and writes a CSV table plus a per-degree markdown
table.  Exit code 0 means every solve met its tolerance; 2 flags degraded
rows (the sweep still completes).

Config files are flat ``key = value`` lines ('#' starts a comment); list
values are comma separated.  Recognized keys, all optional except k and
eps::

    k = 1, 2            polynomial degrees
    eps = 1e-5, 1e-6    diffusion parameters
    n = 8, 16, 32       mesh sizes (doubling; default depends on k)
    sigma = 2.5         transition constant (default k + 3/2 per degree)
    beta1 = 2.0         convection lower bounds used by the mesh
    beta2 = 3.0
    problem = boundary_layer
    solver = direct     or: iterative
    rel_tol = 1e-10
    max_iters = 5000
    restart = 50
    estimate_condition = false   append 1-norm condition estimates
                                 (costly; for the large-N/small-eps cells
                                 where the rate tables visibly degrade)
    quad_order = 4      assembly quadrature (default k + 2)
    dirichlet = weak    or: strong
    out_csv = study.csv
    out_md = study.md
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import dataclass, field

from . import analysis, assembly, mesh, problems, solver

#: default mesh sequences per degree (memory-bounded doubling chains)
DEFAULT_N_BY_K = {
    1: (8, 16, 32, 64, 128, 256),
    2: (8, 16, 32, 64, 128),
    3: (8, 16, 32, 64),
}

CSV_COLUMNS = ("k", "eps", "N", "dofs", "e_IN", "p_IN", "e_Pi", "e_L2",
               "solver_iters", "residual", "wall_ms")


@dataclass
class StudyConfig:
    """Resolved parameters of one study sweep."""

    k_list: tuple
    eps_list: tuple
    n_list: tuple | None = None        # None: per-degree default
    sigma: float | None = None         # None: k + 3/2 per degree
    beta1: float = problems.BETA1
    beta2: float = problems.BETA2
    problem: str = "boundary_layer"
    solver: solver.SolverConfig = field(default_factory=solver.SolverConfig)
    quad_order: int | None = None      # None: k + 2 per degree
    dirichlet: str = "weak"
    out_csv: str | None = None
    out_md: str | None = None

    def sigma_for(self, k):
        return (k + 1.5) if self.sigma is None else self.sigma

    def n_list_for(self, k):
        if self.n_list is not None:
            return tuple(self.n_list)
        try:
            return DEFAULT_N_BY_K[k]
        except KeyError:
            raise ValueError(
                f"no default mesh sequence for k={k}; set 'n' explicitly"
            ) from None

    def validate(self):
        if not self.k_list:
            raise ValueError("config must list at least one degree k")
        if not self.eps_list:
            raise ValueError("config must list at least one eps")
        for k in self.k_list:
            if k < 1:
                raise ValueError(f"polynomial degree must be >= 1, got {k}")
            if self.sigma is not None and self.sigma < k + 0.5:
                raise ValueError(
                    f"sigma={self.sigma} is below k + 1/2 = {k + 0.5} for "
                    f"k={k}; the fine bands would be too narrow for the "
                    "interpolant to track the layers")
            ns = self.n_list_for(k)
            for a, b in zip(ns, ns[1:]):
                if b != 2 * a:
                    raise ValueError(
                        f"mesh sequence must double: got {a} then {b}")
        for e in self.eps_list:
            if e <= 0:
                raise ValueError(f"eps must be positive, got {e}")
        if self.problem not in problems.PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}; available: "
                             f"{sorted(problems.PROBLEMS)}")
        if self.dirichlet not in ("weak", "strong"):
            raise ValueError(f"unknown Dirichlet mode: {self.dirichlet!r}")


@dataclass
class StudyRow:
    """One (k, eps, N) cell of the sweep."""

    k: int
    eps: float
    n: int
    dofs: int
    e_in: float
    e_pi: float
    e_l2: float
    p_in: float | None
    solver_iters: int
    residual: float
    wall_ms: float
    converged: bool
    condition: float | None = None


@dataclass
class StudyReport:
    """All rows of a sweep plus the resolved configuration echo."""

    rows: list
    config_echo: dict

    @property
    def degraded(self):
        return [r for r in self.rows if not r.converged]


def run_study(config):
    """Run the sweep described by ``config``.

    Rows are produced in deterministic order: degrees in listed order,
    then eps in listed order, then N ascending.  A solve that misses its
    tolerance marks the row degraded but the sweep continues.

    Returns
    -------
    StudyReport
    """
    config.validate()
    rows = []
    for k in config.k_list:
        sigma = config.sigma_for(k)
        quad = config.quad_order or (k + 2)
        for eps in config.eps_list:
            chain = []
            for n in config.n_list_for(k):
                t0 = time.perf_counter()
                problem = problems.get_problem(config.problem, eps)
                mcfg = mesh.MeshConfig(n=n, eps=eps, sigma=sigma,
                                       beta1=config.beta1, beta2=config.beta2)
                grid = mesh.build_mesh(mcfg)
                edges = mesh.classify_edges(grid)
                dofmap = assembly.DofMap(k=k, n=n)
                system = assembly.assemble(grid, edges, dofmap, problem, eps,
                                           quad_order=quad,
                                           dirichlet=config.dirichlet)
                x, report = solver.solve(system, config.solver)
                u_h = assembly.DGFunction(grid, dofmap, x)
                record = analysis.supercloseness_error(u_h, edges, problem,
                                                       eps)
                wall_ms = (time.perf_counter() - t0) * 1000.0
                chain.append(StudyRow(
                    k=k, eps=eps, n=n, dofs=record.dofs,
                    e_in=record.e_in, e_pi=record.e_pi, e_l2=record.e_l2,
                    p_in=None, solver_iters=report.iterations,
                    residual=report.residual, wall_ms=wall_ms,
                    converged=report.converged,
                    condition=report.condition_estimate))
            rates = analysis.convergence_rates(
                [(r.n, r.e_in) for r in chain])
            for row, rate in zip(chain, rates):
                row.p_in = rate
            rows.extend(chain)

    echo = {
        "problem": config.problem,
        "k": _fmt_list(config.k_list),
        "eps": _fmt_list(config.eps_list),
        "sigma": ("k + 3/2" if config.sigma is None
                  else _fmt_value(config.sigma)),
        "beta1": _fmt_value(config.beta1),
        "beta2": _fmt_value(config.beta2),
        "n": ("per-degree default" if config.n_list is None
              else _fmt_list(config.n_list)),
        "quad_order": ("k + 2" if config.quad_order is None
                       else str(config.quad_order)),
        "penalty_schedule": "M1:1 M2:N^2 M3:N M4:N",
        "boundary_edge_rule": "same-as-interior",
        "dirichlet": config.dirichlet,
        "solver": config.solver.method,
        "rel_tol": _fmt_value(config.solver.rel_tol),
        "estimate_condition": str(config.solver.estimate_condition).lower(),
        "error_quad_order": "k + 3",
    }
    return StudyReport(rows, echo)


def _fmt_value(v):
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _fmt_list(values):
    return ", ".join(_fmt_value(v) for v in values)


def format_csv(report):
    """Render a report as CSV text with a '#'-commented config echo."""
    out = io.StringIO()
    for key, val in report.config_echo.items():
        out.write(f"# {key} = {val}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report.rows:
        writer.writerow([
            r.k, _fmt_value(r.eps), r.n, r.dofs,
            format(r.e_in, ".6e"),
            "" if r.p_in is None else format(r.p_in, ".4f"),
            format(r.e_pi, ".6e"), format(r.e_l2, ".6e"),
            r.solver_iters, format(r.residual, ".3e"),
            format(r.wall_ms, ".1f"),
        ])
    for r in report.rows:
        if r.condition is not None:
            out.write(f"# condition_estimate k={r.k} eps={_fmt_value(r.eps)} "
                      f"N={r.n} = {format(r.condition, '.3e')}\n")
    return out.getvalue()


def parse_csv(text):
    """Parse :func:`format_csv` output back into (echo, rows-as-dicts)."""
    echo = {}
    data_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            echo[key.strip()] = val.strip()
        elif line.strip():
            data_lines.append(line)
    reader = csv.DictReader(data_lines)
    rows = []
    for rec in reader:
        rows.append({
            "k": int(rec["k"]), "eps": float(rec["eps"]),
            "N": int(rec["N"]), "dofs": int(rec["dofs"]),
            "e_IN": float(rec["e_IN"]),
            "p_IN": None if rec["p_IN"] == "" else float(rec["p_IN"]),
            "e_Pi": float(rec["e_Pi"]), "e_L2": float(rec["e_L2"]),
            "solver_iters": int(rec["solver_iters"]),
            "residual": float(rec["residual"]),
            "wall_ms": float(rec["wall_ms"]),
        })
    return echo, rows


def format_markdown(report):
    """Render per-degree tables: rows N, column pairs (error, order) per
    eps, '--' where no rate exists."""
    lines = []
    for key, val in report.config_echo.items():
        lines.append(f"<!-- {key} = {val} -->")
    for k in sorted({r.k for r in report.rows}):
        k_rows = [r for r in report.rows if r.k == k]
        eps_values = list(dict.fromkeys(r.eps for r in k_rows))
        ns = sorted({r.n for r in k_rows})
        lines.append("")
        lines.append(f"## degree k = {k}")
        lines.append("")
        header = ["N"]
        for eps in eps_values:
            header.extend([f"e_IN (eps={_fmt_value(eps)})", "order"])
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        cells = {(r.eps, r.n): r for r in k_rows}
        for n in ns:
            row = [str(n)]
            for eps in eps_values:
                r = cells.get((eps, n))
                if r is None:
                    row.extend(["--", "--"])
                else:
                    row.append(format(r.e_in, ".3e"))
                    row.append("--" if r.p_in is None
                               else format(r.p_in, ".2f"))
            lines.append("| " + " | ".join(row) + " |")
    with_cond = [r for r in report.rows if r.condition is not None]
    if with_cond:
        lines.append("")
        lines.append("Condition estimates (1-norm):")
        lines.append("")
        for r in with_cond:
            lines.append(f"- k={r.k}, eps={_fmt_value(r.eps)}, N={r.n}: "
                         f"{format(r.condition, '.3e')}")
    return "\n".join(lines) + "\n"


def _parse_config_file(path):
    """Read a flat key = value config file into a dict of strings."""
    raw = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}")
            raw[key.strip()] = val.strip()
    return raw


def _bool(text):
    val = str(text).strip().lower()
    if val in ("true", "yes", "1", "on"):
        return True
    if val in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _ints(text):
    return tuple(int(tok) for tok in str(text).split(",") if tok.strip())


def _floats(text):
    return tuple(float(tok) for tok in str(text).split(",") if tok.strip())


def build_config(file_values, args):
    """Merge config-file values and command-line overrides."""
    raw = dict(file_values)

    def take(key, override):
        if override is not None:
            raw[key] = override
        return raw.get(key)

    k_val = take("k", args.k)
    eps_val = take("eps", args.eps)
    n_val = take("n", args.n)
    if k_val is None:
        raise ValueError("no polynomial degrees given (key 'k' or --k)")
    if eps_val is None:
        raise ValueError("no diffusion parameters given (key 'eps' or --eps)")

    solver_cfg = solver.SolverConfig(
        method=take("solver", args.solver) or "direct",
        rel_tol=float(raw.get("rel_tol", 1e-10)),
        max_iters=int(raw.get("max_iters", 5000)),
        restart=int(raw.get("restart", 50)),
        estimate_condition=_bool(raw.get("estimate_condition", "false")),
    )
    quad = take("quad_order", args.quad_order)
    return StudyConfig(
        k_list=_ints(k_val),
        eps_list=_floats(eps_val),
        n_list=None if n_val is None else _ints(n_val),
        sigma=None if raw.get("sigma") is None else float(raw["sigma"]),
        beta1=float(raw.get("beta1", problems.BETA1)),
        beta2=float(raw.get("beta2", problems.BETA2)),
        problem=raw.get("problem", "boundary_layer"),
        solver=solver_cfg,
        quad_order=None if quad is None else int(quad),
        dirichlet=raw.get("dirichlet", "weak"),
        out_csv=take("out_csv", args.out_csv),
        out_md=take("out_md", args.out_md),
    )


def main(argv=None):
    """Entry point of the ``nipg2d`` command."""
    parser = argparse.ArgumentParser(
        prog="nipg2d",
        description="DG convergence studies for layered convection-"
                    "diffusion problems on two-band meshes")
    sub = parser.add_subparsers(dest="command", required=True)
    study = sub.add_parser(
        "study", help="run a (k, eps, N) convergence sweep")
    study.add_argument("--config", help="key = value config file")
    study.add_argument("--k", help="degrees, comma separated (override)")
    study.add_argument("--eps", help="diffusion parameters (override)")
    study.add_argument("--n", help="mesh sizes, doubling (override)")
    study.add_argument("--solver", choices=["direct", "iterative"],
                       help="linear solver (override)")
    study.add_argument("--quad-order", dest="quad_order",
                       help="assembly quadrature points per direction")
    study.add_argument("--out-csv", dest="out_csv",
                       help="write the CSV table here")
    study.add_argument("--out-md", dest="out_md",
                       help="write the markdown table here")
    args = parser.parse_args(argv)

    try:
        file_values = (_parse_config_file(args.config)
                       if args.config else {})
        config = build_config(file_values, args)
        report = run_study(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    csv_text = format_csv(report)
    md_text = format_markdown(report)
    if config.out_csv:
        with open(config.out_csv, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    if config.out_md:
        with open(config.out_md, "w", encoding="utf-8") as fh:
            fh.write(md_text)
    if not config.out_csv and not config.out_md:
        sys.stdout.write(csv_text)

    for row in report.degraded:
        print(f"warning: solve k={row.k} eps={row.eps} N={row.n} missed the "
              f"tolerance (residual {row.residual:.3e})", file=sys.stderr)
    return 2 if report.degraded else 0


if __name__ == "__main__":
    sys.exit(main())
