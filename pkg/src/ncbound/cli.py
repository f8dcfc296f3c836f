"""Command-line interface.

Single results are printed as one JSON object on stdout, curves are written
as headered CSV and ``spectrum`` prints an aligned table.  Diagnostics go to
stderr.  Exit codes: 0 success, 1 bad arguments or I/O failure, 2 no bound
state, 3 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ncbound import algebra, observables
from ncbound.errors import DomainError, NoSolution, NonConvergence
from ncbound.radial import QuantumNumbers
from ncbound.selfconsist import (
    ETA_TOL,
    G_TOL,
    OMEGA_C,
    Coupling,
    critical_g,
    rhs_curve,
    solve_level,
)

EXIT_OK, EXIT_USAGE, EXIT_NO_SOLUTION, EXIT_NONCONVERGENCE = 0, 1, 2, 3
SIG_DIGITS = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def fmt(x) -> str:
    """Number formatted to 12 significant digits; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.{SIG_DIGITS}g}"


def _round(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_round(v) for v in x]
    return float(fmt(x))


def emit_json(record: dict, stream=None):
    stream = stream or sys.stdout
    json.dump({k: _round(v) for k, v in record.items()}, stream)
    stream.write("\n")


def parse_range(text: str) -> np.ndarray:
    """``start:stop:step``, stop included when within half a step."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"range must look like start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise UsageError(f"invalid range {text!r}")
    count = int(np.floor((stop - start) / step + 0.5)) + 1
    return start + step * np.arange(count)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _level(text: str) -> QuantumNumbers:
    try:
        n, l = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"level must look like N,L, got {text!r}") from None
    return QuantumNumbers(n, l)


def _map(fn, items, jobs):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


# -- commands ------------------------------------------------------------------

def cmd_solve(args):
    qn = QuantumNumbers(args.n, args.l)
    coupling = Coupling(args.alpha_z, args.omega)
    try:
        sol = solve_level(qn, coupling, tol=args.tol)
    except NoSolution as exc:
        crit = critical_g(qn, omega=args.omega)
        emit_json(
            {
                "error": "no bound state: g > g_critical",
                "n": qn.n,
                "l": qn.l,
                "alpha_z": args.alpha_z,
                "omega": args.omega,
                "g": coupling.g,
                "g_critical": crit.g_critical,
                "alpha_z_critical": crit.alpha_z_critical,
            },
            sys.stderr,
        )
        raise exc
    emit_json(
        {
            "n": qn.n,
            "l": qn.l,
            "alpha_z": args.alpha_z,
            "omega": args.omega,
            "tol": args.tol,
            "eta": sol.eta,
            "epsilon": sol.epsilon,
            "energy_mu_c2": sol.energy,
            "mean_distance_compton": sol.mean_distance,
            "residual": sol.residual,
            "iterations": sol.iterations,
            "branch": sol.branch,
        }
    )


def _critical_record(qn, omega, tol):
    crit = critical_g(qn, tol=tol, omega=omega)
    return {
        "n": qn.n,
        "l": qn.l,
        "omega": omega,
        "tol": tol,
        "g_critical": crit.g_critical,
        "alpha_z_critical": crit.alpha_z_critical,
        "eta_critical": crit.eta_critical,
    }


def cmd_critical(args):
    emit_json(_critical_record(QuantumNumbers(args.n, args.l), args.omega, args.tol))


def cmd_omega_c(args):
    record = _critical_record(QuantumNumbers(1, 0), args.omega, args.tol)
    record["omega_c"] = record["g_critical"]
    emit_json(record)


def _solve_or_none(task):
    qn, alpha_z, omega, tol = task
    try:
        return solve_level(qn, Coupling(alpha_z, omega), tol=tol)
    except NoSolution:
        return None


def curve_rows(args):
    """Header and rows for ``curve``; shared with the tests."""
    if args.kind == "rhs":
        qn = QuantumNumbers(args.n, args.l)
        etas = parse_range(args.eta)
        if etas[0] <= 0 or etas[-1] > 1 + 1e-12:
            raise UsageError("eta range must lie in (0, 1]")
        etas = np.minimum(etas, 1.0)
        return ["eta", "rhs"], [list(p) for p in rhs_curve(qn, args.g, etas)]

    alphas = parse_range(args.alpha_z)
    if args.kind == "energy":
        qn = QuantumNumbers(args.n, args.l)
        sols = _map(_solve_or_none, [(qn, a, args.omega, args.tol) for a in alphas], args.jobs)
        rows = []
        for a, sol in zip(alphas, sols):
            try:
                dirac = (
                    observables.dirac_ground_energy(a)
                    if qn.n == 1
                    else observables.dirac_energy(qn.n, qn.l + 0.5, a)
                )
            except DomainError:
                dirac = None
            rows.append(
                [a, observables.schrodinger_energy(qn, a), dirac, sol.energy if sol else None]
            )
        return ["alpha_z", "E_schrodinger", "E_dirac", "E_noncommutative"], rows

    levels = [_level(v) for v in args.level] if args.level else [QuantumNumbers(args.n, args.l)]
    tasks = [(qn, a, args.omega, args.tol) for a in alphas for qn in levels]
    sols = _map(_solve_or_none, tasks, args.jobs)
    k = len(levels)
    if k == 1:
        header = ["alpha_z", "epsilon"]
    else:
        header = ["alpha_z"] + [f"epsilon_{qn.n}{qn.l}" for qn in levels]
    rows = []
    for i, a in enumerate(alphas):
        chunk = sols[i * k : (i + 1) * k]
        rows.append([a] + [s.epsilon if s else None for s in chunk])
    return header, rows


def write_csv(header, rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def cmd_curve(args):
    header, rows = curve_rows(args)
    buf = io.StringIO()
    write_csv(header, rows, buf)
    if args.out in (None, "-"):
        sys.stdout.write(buf.getvalue())
        return
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc


def spectrum_rows(alpha_z, n_max, omega, tol, jobs=1):
    levels = [QuantumNumbers(n, l) for n in range(1, n_max + 1) for l in range(n)]
    sols = _map(_solve_or_none, [(qn, alpha_z, omega, tol) for qn in levels], jobs)
    return list(zip(levels, sols))


def cmd_spectrum(args):
    if not 1 <= args.n_max <= 20:
        raise UsageError("--n-max must lie in [1, 20]")
    rows = spectrum_rows(args.alpha_z, args.n_max, args.omega, args.tol, args.jobs)
    print(f"# alpha_z={fmt(args.alpha_z)} omega={fmt(args.omega)} tol={fmt(args.tol)}")
    cols = ("n", "l", "E_nc", "E_S", "epsilon", "mean_r")
    print(f"{cols[0]:>3} {cols[1]:>3} {cols[2]:>20} {cols[3]:>20} {cols[4]:>20} {cols[5]:>20}")
    for qn, sol in rows:
        e_s = fmt(observables.schrodinger_energy(qn, args.alpha_z))
        if sol is None:
            cells = ("—", e_s, "—", "—")
        else:
            cells = (fmt(sol.energy), e_s, fmt(sol.epsilon), fmt(sol.mean_distance))
        print(f"{qn.n:>3} {qn.l:>3} " + " ".join(f"{c:>20}" for c in cells))


def _eps_matrix(args, size):
    if args.eps_matrix is not None:
        try:
            values = json.loads(args.eps_matrix)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--eps-matrix is not valid JSON: {exc}") from None
        return algebra.EpsilonMatrix(values)
    return algebra.EpsilonMatrix.uniform(size, args.eps_uniform)


def cmd_algebra(args):
    if args.sub == "commutators":
        rep = algebra.TwoBodyRep(args.m1, args.m2, args.eps)
        values = algebra.commutator_table(rep)
        record = {"m1": args.m1, "m2": args.m2, "epsilon": args.eps}
        record.update(dict(zip(algebra.COMMUTATOR_LABELS, values)))
        record["total_momentum_x1"] = values[0] + values[2]
        record["total_momentum_x2"] = values[1] + values[3]
        emit_json(record)
        return
    masses = _floats(args.masses)
    eps = _eps_matrix(args, len(masses))
    if args.sub == "coeffs":
        coeffs = algebra.kinetic_coefficients(masses, eps)
        N = len(masses)
        record = {"masses": masses, "A": coeffs.A.tolist()}
        record["B"] = [coeffs.B[i, k] for i in range(N) for k in range(i + 1, N)]
        emit_json(record)
    else:
        com, rel, decoupled = algebra.com_separation_check(masses, eps)
        emit_json(
            {
                "masses": masses,
                "com_coefficient": com,
                "decoupled": decoupled,
                "relative_block": rel.tolist(),
                "kinetic_bound": algebra.kinetic_energy_bound_check(masses, eps),
            }
        )


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ncbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def coupling_flags(p, with_tol=ETA_TOL):
        p.add_argument("--omega", type=float, default=OMEGA_C)
        p.add_argument("--tol", type=float, default=with_tol)

    def level_flags(p, required=True):
        p.add_argument("-n", type=int, required=required, default=None if required else 1)
        p.add_argument("-l", type=int, required=required, default=None if required else 0)

    p = sub.add_parser("solve", help="solve one level")
    level_flags(p)
    p.add_argument("--alpha-z", type=float, required=True)
    coupling_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("critical", help="critical coupling of one level")
    level_flags(p)
    coupling_flags(p, G_TOL)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("omega-c", help="critical coupling of the ground state")
    coupling_flags(p, G_TOL)
    p.set_defaults(func=cmd_omega_c)

    p = sub.add_parser("curve", help="CSV data for the rhs, energy and epsilon curves")
    p.add_argument("kind", choices=("rhs", "energy", "epsilon"))
    level_flags(p, required=False)
    p.add_argument("--level", action="append", help="N,L; repeatable (epsilon only)")
    p.add_argument("--g", type=float, default=0.0, help="coupling g for the rhs curve")
    p.add_argument("--eta", default="0.001:1:0.001", help="eta range for the rhs curve")
    p.add_argument("--alpha-z", default="0.05:1.0:0.05")
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    coupling_flags(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("spectrum", help="all levels up to n-max")
    p.add_argument("--alpha-z", type=float, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    coupling_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("algebra", help="operator algebra checks")
    p.add_argument("sub", choices=("commutators", "coeffs", "com-check"))
    p.add_argument("--m1", type=float, default=1.0)
    p.add_argument("--m2", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--masses", default="1,1")
    p.add_argument("--eps-uniform", type=float, default=0.0)
    p.add_argument("--eps-matrix", default=None, help="JSON nested list")
    p.set_defaults(func=cmd_algebra)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoSolution as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
