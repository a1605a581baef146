"""Command-line front end: verify, evolve, scan and ep."""
import argparse
import json
import sys

import numpy as np

from . import __version__
from .dyson import DysonMapUndefined, DysonSpec, dyson_map, energy_operator_conjugated, metric, target_hamiltonian
from .ermakov import SingularTrajectory, chi_derivatives, ep_numeric_solve
from .evolution import closed_form_state, metric_inner_product
from .spin import ModelParams, hamiltonian, level_labels
from .verify import ConfigError, RunConfig, run_verification

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_FLOAT_KEYS = ("gamma", "omega", "hbar", "c1", "c2", "c3", "tmax", "dt", "fd_step",
               "gamma_min", "gamma_max")
_INT_KEYS = ("branch", "samples", "steps")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--config", metavar="PATH", help="JSON or key=value file; flags override it")
    p.add_argument("--spin", help="1/2, 1 or 3/2")
    p.add_argument("--gamma", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--hbar", type=float)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)
    p.add_argument("--c3", type=float)
    p.add_argument("--branch", type=int, choices=(1, -1))
    p.add_argument("--tmax", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--fd-step", dest="fd_step", type=float)
    p.add_argument("--samples", type=int, help="time samples for residual checks")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out", metavar="PATH", help="output path, '-' for stdout")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help="tolerance override: a check name, 'closed' or 'fd'")


def build_parser():
    parser = _Parser(prog="dysonspin", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run the residual suite and write a report")
    _common(v)
    v.add_argument("--expect", choices=("unbroken", "broken"))
    e = sub.add_parser("evolve", help="write a time series of a superposition state")
    _common(e)
    e.add_argument("--coeff", action="append", default=[], metavar="K=VALUE",
                   help="coefficient of level K, complex allowed; use --coeff=-1=VALUE for negative K")
    s = sub.add_parser("scan", help="sweep gamma and report spectrum and metric positivity")
    _common(s)
    s.add_argument("--gamma-min", dest="gamma_min", type=float, default=None)
    s.add_argument("--gamma-max", dest="gamma_max", type=float, default=None)
    s.add_argument("--steps", type=int, default=None)
    p = sub.add_parser("ep", help="compare closed-form and integrated chi(t)")
    _common(p)
    return parser


def read_config_file(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise UsageError(f"{path}: config must be a flat object")
        return data
    except json.JSONDecodeError:
        pass
    data = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        data[key.replace("-", "_")] = value
    return data


def _parse_assignments(items, what):
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"{what} expects NAME=VALUE, got {item!r}")
        name, value = item.split("=", 1)
        out[name.strip()] = value.strip()
    return out


def _tolerances(raw):
    tols = {}
    for name, value in raw.items():
        try:
            tols[name] = float(value)
        except ValueError:
            raise UsageError(f"tolerance {name}: not a number: {value!r}") from None
    return tols


def resolve(args):
    """Merge config file and flags into (RunConfig, extras)."""
    values = read_config_file(args.config) if args.config else {}
    values = {k.replace("-", "_"): v for k, v in values.items()}
    file_tols = values.pop("tol", None) or values.pop("tolerances", None) or {}
    if isinstance(file_tols, str):
        file_tols = _parse_assignments(file_tols.split(","), "tol")
    for key, val in vars(args).items():
        if key in ("command", "config", "tol", "coeff") or val is None:
            continue
        values[key] = val
    tols = _tolerances({**file_tols, **_parse_assignments(args.tol, "--tol")})
    extras = {k: values.pop(k) for k in ("gamma_min", "gamma_max", "steps") if k in values}
    coeffs = values.pop("coeff", None)
    try:
        for k in _FLOAT_KEYS:
            if k in values:
                values[k] = float(values[k])
        for k in _INT_KEYS:
            if k in values:
                values[k] = int(values[k])
        for k in ("gamma_min", "gamma_max"):
            if k in extras:
                extras[k] = float(extras[k])
        if "steps" in extras:
            extras["steps"] = int(extras["steps"])
    except ValueError as exc:
        raise UsageError(f"bad config value: {exc}") from None
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(**values, tolerances=tols)
    if args.command == "evolve":
        extras["coeff"] = list(args.coeff) or coeffs
    try:
        cfg.validate()
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    if 0 < abs(abs(cfg.gamma) - 1) < 1e-9 or abs(cfg.gamma) == 1:
        print("warning: |gamma| = 1 is an exceptional point", file=sys.stderr)
    return cfg, extras


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return "%.17g" % x


def write_csv(fh, header, rows):
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(_fmt(x) for x in row) + "\n")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    try:
        return open(path, "w", newline="\n"), True
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None


def _emit(cfg, writer):
    fh, close = _open_out(cfg.out)
    try:
        writer(fh)
    finally:
        if close:
            fh.close()


def _grid(cfg):
    n = max(1, int(round(cfg.tmax / cfg.dt)))
    return np.linspace(0.0, n * cfg.dt, n + 1)


def cmd_verify(cfg):
    report = run_verification(cfg)
    if cfg.format == "json":
        _emit(cfg, lambda fh: fh.write(json.dumps(report.as_dict(), indent=2) + "\n"))
    else:
        rows = [(c.name, c.anchor, c.residual, c.tol, c.passed, c.notes.replace(",", ";"))
                for c in report.checks]
        _emit(cfg, lambda fh: write_csv(fh, ("name", "anchor", "residual", "tol", "pass", "notes"), rows))
    return report


def parse_coefficients(items, p):
    labels = level_labels(p.spin)
    if not items:
        items = [f"{labels[0]}=1"]
    if isinstance(items, str):
        items = items.split(",")
    coeffs = {}
    for name, value in _parse_assignments(items, "--coeff").items():
        try:
            k = int(name)
            c = complex(value.replace(" ", ""))
        except ValueError:
            raise UsageError(f"bad coefficient {name}={value}") from None
        if k not in labels:
            raise UsageError(f"level {k} not in {labels}")
        coeffs[k] = c
    if all(c == 0 for c in coeffs.values()):
        raise UsageError("null state: all coefficients are zero")
    return coeffs


def evolve_rows(cfg, coeffs):
    """One row per grid point; state normalised by the metric at t = 0."""
    p = cfg.params
    spec = DysonSpec.build(p, cfg.c1, cfg.c2, cfg.c3, cfg.branch)
    grid = _grid(cfg)
    psi0 = closed_form_state(p, coeffs, 0.0)
    scale = 1 / np.sqrt(metric_inner_product(psi0, psi0, metric(spec, 0.0)).real)
    rows = []
    for t in grid:
        psi = scale * closed_form_state(p, coeffs, t)
        eta = dyson_map(spec, t)
        phi = eta @ psi
        rho = metric(spec, t)
        row = [t]
        for v in (psi, phi):
            for z in v:
                row += [z.real, z.imag]
        row += [np.vdot(phi, phi).real, metric_inner_product(psi, psi, rho).real,
                np.vdot(phi, target_hamiltonian(spec, t) @ phi).real,
                metric_inner_product(psi, energy_operator_conjugated(spec, t) @ psi, rho).real,
                spec.chi(t)]
        rows.append(row)
    header = ["t"]
    for rep in ("psi", "phi"):
        for i in range(p.dim):
            header += [f"re_{rep}{i}", f"im_{rep}{i}"]
    header += ["phi_norm", "psi_rho_norm", "phi_h_phi", "psi_rho_Htilde_psi", "chi"]
    return header, rows


def cmd_evolve(cfg, coeffs):
    if abs(cfg.gamma) >= 1:
        raise UsageError("evolve requires |gamma| < 1")
    header, rows = evolve_rows(cfg, coeffs)
    _emit(cfg, lambda fh: write_csv(fh, header, rows))


def scan_rows(cfg, gmin, gmax, steps):
    gammas = np.linspace(gmin, gmax, steps) if steps > 1 else np.array([gmin])
    rows = []
    for g in gammas:
        p = ModelParams(cfg.spin, g, cfg.omega, cfg.hbar)
        vals = np.linalg.eigvals(hamiltonian(p))
        vals = vals[np.lexsort((vals.imag, vals.real))]
        broken = bool(np.max(np.abs(vals.imag)) > 1e-10)
        if abs(g) < 1 and not abs(abs(g) - 1) < 1e-12:
            spec = DysonSpec.build(p, cfg.c1, cfg.c2, cfg.c3, 1)
            min_rho = float(np.min(np.linalg.eigvalsh(metric(spec, 0.0))))
        else:
            min_rho = float("nan")
        row = [g]
        for v in vals:
            row += [v.real, v.imag]
        regime = "exceptional" if abs(abs(g) - 1) < 1e-12 else ("broken" if broken else "unbroken")
        rows.append(row + [min_rho, regime])
    dim = ModelParams(cfg.spin, 0.0).dim
    header = ["gamma"]
    for i in range(dim):
        header += [f"re_E{i}", f"im_E{i}"]
    return header + ["min_rho_eig", "regime"], rows


def cmd_scan(cfg, gmin=0.0, gmax=1.5, steps=151):
    if not (-2 <= gmin <= 2 and -2 <= gmax <= 2):
        raise UsageError("gamma range must lie in [-2, 2]")
    if steps < 1:
        raise UsageError("steps must be positive")
    header, rows = scan_rows(cfg, gmin, gmax, steps)
    _emit(cfg, lambda fh: write_csv(fh, header, rows))


def ep_rows(cfg):
    p = cfg.params
    spec = DysonSpec.build(p, cfg.c1, cfg.c2, cfg.c3, cfg.branch)
    taus = _grid(cfg) / p.hbar
    chi, chid, _ = chi_derivatives(spec.ep, taus)
    num = ep_numeric_solve(chi[0], chid[0], spec.ep.freq, spec.ep.cubic, taus)
    return ["t", "chi_closed", "chi_numeric", "abs_diff"], \
        [(t * p.hbar, a, b, abs(a - b)) for t, a, b in zip(taus, chi, num)]


def cmd_ep(cfg):
    if abs(cfg.gamma) >= 1:
        raise UsageError("ep requires |gamma| < 1")
    if cfg.branch != 1:
        raise UsageError("branch -1 gives chi < 0: no positive trajectory to integrate")
    header, rows = ep_rows(cfg)
    _emit(cfg, lambda fh: write_csv(fh, header, rows))


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg, extras = resolve(args)
        if args.command == "verify":
            report = cmd_verify(cfg)
            return EXIT_PASS if report.summary else EXIT_FAIL
        if args.command == "evolve":
            cmd_evolve(cfg, parse_coefficients(extras.get("coeff"), cfg.params))
        elif args.command == "scan":
            cmd_scan(cfg, extras.get("gamma_min", 0.0), extras.get("gamma_max", 1.5),
                     extras.get("steps", 151))
        elif args.command == "ep":
            cmd_ep(cfg)
        return EXIT_PASS
    except UsageError as exc:
        print(f"dysonspin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DysonMapUndefined, SingularTrajectory) as exc:
        print(f"dysonspin: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"dysonspin: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
