"""Batch command-line interface.

Subcommands: verify | spectrum | eigenfunctions | coherent | uncertainty.
Every run reads flags, then an optional flat key=value config file, then
defaults (flags win).  Reports are JSON or CSV, written atomically; exit
codes are 0 for success, 1 for verification failure, 2 for invalid
configuration.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import reports
from .coherent import coherent_state, full_lowering_misfit, verify_half_lowering
from .spectral import fd_spectrum, galerkin_spectrum, merged_spectrum_from_index
from .systems import make_xn_system, verify_coupled_susy, verify_su11
from .towers import SectorLabel, eigenstate, ground_states, normalized_samples
from .uncertainty import (
    direct_sum,
    uncertainty_product_LA,
    uncertainty_product_tilde,
    uncertainty_product_XP,
)


class ConfigError(Exception):
    pass


_SECTORS = {
    "psi": SectorLabel.PSI,
    "phi": SectorLabel.PHI,
    "psitilde": SectorLabel.PSI_TILDE,
    "phitilde": SectorLabel.PHI_TILDE,
}


def _load_config_file(path):
    values = {}
    try:
        with open(path) as handle:
            for line_no, line in enumerate(handle, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{line_no}: expected key=value")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _merge(args, config, key, cast, default):
    """flags > config file > defaults"""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        try:
            return cast(config[key])
        except ValueError as exc:
            raise ConfigError(f"config key {key}: {exc}") from exc
    return default


def _parse_complex(text) -> complex:
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc


def _parse_grid(text):
    try:
        lo, hi, count = str(text).split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError as exc:
        raise ConfigError(f"grid must be lo:hi:count, got {text!r}") from exc
    if count < 2 or not hi > lo:
        raise ConfigError("grid needs hi > lo and count >= 2")
    return lo, hi, count


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coupledsusy",
        description="Exact and numerical workbench for x^n coupled SUSY systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=None, help="family index (default 2)")
        p.add_argument("--tol", type=float, default=None, help="tolerance (default 1e-12)")
        p.add_argument("--precision-bits", type=int, default=None, help="working precision")
        p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--config", type=str, default=None, help="flat key=value config file")

    p_verify = sub.add_parser("verify", help="check the defining and su(1,1) identities")
    common(p_verify)
    p_verify.add_argument("--window-lo", type=int, default=None)
    p_verify.add_argument("--window-hi", type=int, default=None)
    p_verify.add_argument("--mutate", type=str, default=None, help=argparse.SUPPRESS)

    p_spec = sub.add_parser("spectrum", help="ladder eigenvalues plus Galerkin (and optional FD)")
    common(p_spec)
    p_spec.add_argument("--count", type=int, default=None, help="number of eigenvalues")
    p_spec.add_argument("--galerkin-size", type=int, default=None, help="basis size per sector")
    p_spec.add_argument("--fd", action="store_true", help="also run the finite-difference check")
    p_spec.add_argument("--fd-half-width", type=float, default=None)
    p_spec.add_argument("--fd-grid", type=int, default=None)

    p_eig = sub.add_parser("eigenfunctions", help="sample normalised eigenfunctions on a grid")
    common(p_eig)
    p_eig.add_argument("--sector", choices=sorted(_SECTORS), default=None)
    p_eig.add_argument("--m", type=int, default=None, help="tower level")
    p_eig.add_argument("--grid", type=str, default=None, help="lo:hi:count")

    p_coh = sub.add_parser("coherent", help="build a coherent state and verify half-lowering")
    common(p_coh)
    p_coh.add_argument("--sector", choices=sorted(_SECTORS), default=None)
    p_coh.add_argument("--z", type=str, default=None, help="displacement parameter, |z| < 1")

    p_unc = sub.add_parser("uncertainty", help="uncertainty products and Robertson bounds")
    common(p_unc)
    p_unc.add_argument(
        "--state",
        type=str,
        default=None,
        help="ground | <sector>:<m> | mixed (equal psi0 / phi~0 mixture)",
    )
    p_unc.add_argument("--pair", choices=("la", "tilde", "xp", "all"), default=None)

    return parser


def _emit(args, config, payload, csv_header=None, csv_rows=None):
    out_format = _merge(args, config, "format", str, "json")
    out_path = _merge(args, config, "out", str, None)
    if out_format == "csv":
        if csv_header is None:
            raise ConfigError("this command has no CSV representation")
        text = reports.csv_text(csv_header, csv_rows)
    else:
        text = reports.dumps(payload)
    if out_path:
        reports.atomic_write_text(out_path, text)
    else:
        sys.stdout.write(text)


def _common_values(args, config):
    n = _merge(args, config, "n", int, 2)
    if n < 1:
        raise ConfigError("family index n must be >= 1")
    tol = _merge(args, config, "tol", float, 1e-12)
    if not tol > 0:
        raise ConfigError("tolerance must be positive")
    bits = _merge(args, config, "precision_bits", int, 128)
    if bits < 24:
        raise ConfigError("precision-bits must be at least 24")
    return n, tol, bits


def cmd_verify(args, config) -> int:
    n, _, _ = _common_values(args, config)
    mutate = _merge(args, config, "mutate", str, None)
    try:
        system = make_xn_system(n, mutate=mutate)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    lo = _merge(args, config, "window_lo", int, None)
    hi = _merge(args, config, "window_hi", int, None)
    window = None if lo is None or hi is None else range(lo, hi + 1)
    if window is not None and len(window) == 0:
        raise ConfigError("verification window is empty")
    all_reports = verify_coupled_susy(system, window) + verify_su11(system, window)
    passed = all(r.passed for r in all_reports)
    payload = {
        "n": n,
        "gamma": system.gamma,
        "delta": system.delta,
        "mutation": system.mutation,
        "pass": passed,
        "identities": [r.to_json_dict() for r in all_reports],
    }
    _emit(args, config, payload)
    return 0 if passed else 1


def cmd_spectrum(args, config) -> int:
    n, _, bits = _common_values(args, config)
    count = _merge(args, config, "count", int, 6)
    if count < 1:
        raise ConfigError("count must be >= 1")
    size = _merge(args, config, "galerkin_size", int, max(4, (count + 1) // 2 + 2))
    system = make_xn_system(n)
    theory = merged_spectrum_from_index(n, count)
    galerkin = [
        galerkin_spectrum(system, residue, size, precision_bits=bits)
        for residue in (0, 2 * n - 1)
    ]
    payload = {
        "n": n,
        "theory": [float(t) for t in theory],
        "galerkin": [r.to_json_dict() for r in galerkin],
    }
    rows = [(i, float(t)) for i, t in enumerate(theory)]
    header = ("index", "theory")
    run_fd = args.fd or str(config.get("fd", "")).lower() in ("1", "true", "yes")
    if run_fd:
        half_width = _merge(args, config, "fd_half_width", float, {1: 12.0, 2: 6.0}.get(n, 6.0))
        grid = _merge(args, config, "fd_grid", int, {1: 2000, 2: 4000}.get(n, 1000))
        fd = fd_spectrum(n, half_width, grid, count=count)
        payload["fd"] = fd.to_json_dict()
        header = ("index", "computed", "theory", "rel_error")
        rows = list(fd.rows())
    _emit(args, config, payload, csv_header=header, csv_rows=rows)
    return 0


def cmd_eigenfunctions(args, config) -> int:
    n, _, _ = _common_values(args, config)
    sector = _SECTORS[_merge(args, config, "sector", str, "psi")]
    m = _merge(args, config, "m", int, 0)
    grid = _parse_grid(_merge(args, config, "grid", str, "-4:4:401"))
    import numpy as np

    system = make_xn_system(n)
    try:
        record = eigenstate(system, sector, m)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    lo, hi, count = grid
    xs = np.linspace(lo, hi, count)
    values = normalized_samples(record, xs)
    payload = {
        "record": record.to_json_dict(),
        "grid": {"lo": lo, "hi": hi, "count": count},
        "values": [float(v) for v in values],
    }
    rows = [(float(x), float(v)) for x, v in zip(xs, values)]
    _emit(args, config, payload, csv_header=("x", "value"), csv_rows=rows)
    return 0


def cmd_coherent(args, config) -> int:
    n, tol, _ = _common_values(args, config)
    sector = _SECTORS[_merge(args, config, "sector", str, "psi")]
    z = _parse_complex(_merge(args, config, "z", str, "0.5"))
    system = make_xn_system(n)
    try:
        state = coherent_state(system, sector, z, tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    payload = state.to_json_dict()
    payload["norm_sq"] = state.norm_sq()
    if sector in (SectorLabel.PSI, SectorLabel.PHI_TILDE) and z != 0:
        check = verify_half_lowering(system, sector, z, tol)
        payload["half_lowering"] = {
            "operator": check.operator,
            "target_sector": check.target_sector.value,
            "scalar": check.scalar,
            "residual": check.residual,
        }
        if sector is SectorLabel.PSI:
            _, misfit = full_lowering_misfit(system, z, tol)
            payload["full_lowering_best_fit_residual"] = misfit
    rows = [
        (state.m_start + i, float(abs(c) ** 2)) for i, c in enumerate(state.coefficients)
    ]
    _emit(args, config, payload, csv_header=("m", "weight"), csv_rows=rows)
    return 0


def _resolve_state(system, text):
    text = (text or "ground").strip().lower()
    if text in ("ground", "psi:0"):
        return ("la", eigenstate(system, SectorLabel.PSI, 0))
    if text == "mixed":
        psi0, _ = ground_states(system)
        phi_t0 = eigenstate(system, SectorLabel.PHI_TILDE, 0)
        return ("xp", direct_sum(psi0, Fraction(1, 2), phi_t0, Fraction(1, 2)))
    if ":" in text:
        name, _, level = text.partition(":")
        if name in _SECTORS:
            try:
                return ("la", eigenstate(system, _SECTORS[name], int(level)))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
    raise ConfigError(f"cannot parse state descriptor {text!r}")


def cmd_uncertainty(args, config) -> int:
    n, tol, _ = _common_values(args, config)
    system = make_xn_system(n)
    descriptor = _merge(args, config, "state", str, "ground")
    kind, state = _resolve_state(system, descriptor)
    pair = _merge(args, config, "pair", str, None)
    if pair is None:
        pair = "xp" if kind == "xp" else "auto"
    results = []
    if kind == "xp":
        if pair not in ("xp", "all"):
            raise ConfigError("mixed direct-sum states support only the X,P pair")
        results.append(uncertainty_product_XP(system, state, tol))
    else:
        record = state
        tilde = record.sector.is_tilde
        if pair in ("auto", "la", "all") and not tilde:
            results.append(uncertainty_product_LA(system, record, tol))
        if pair in ("auto", "tilde", "all") and tilde:
            results.append(uncertainty_product_tilde(system, record, tol))
        if pair in ("xp", "all") and not tilde:
            results.append(
                uncertainty_product_XP(system, direct_sum(record, 1, None, 0), tol)
            )
        if not results:
            raise ConfigError(
                f"pair {pair!r} does not apply to a {record.sector.value} state"
            )
    result_dicts = []
    for r in results:
        d = r.to_json_dict()
        d["state_descriptor"] = descriptor
        result_dicts.append(d)
    payload = {
        "n": n,
        "state": descriptor,
        "results": result_dicts,
        "pass": all(r.passed for r in results),
    }
    _emit(args, config, payload)
    return 0 if payload["pass"] else 1


_COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "eigenfunctions": cmd_eigenfunctions,
    "coherent": cmd_coherent,
    "uncertainty": cmd_uncertainty,
}


def _join_value_flags(argv):
    """Glue values onto flags whose arguments may start with '-' (--z -0.3)."""
    joined = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if token in ("--grid", "--z") and i + 1 < len(argv):
            joined.append(f"{token}={argv[i + 1]}")
            skip = True
        else:
            joined.append(token)
    return joined


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_join_value_flags(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    config = {}
    if getattr(args, "config", None):
        try:
            config = _load_config_file(args.config)
        except ConfigError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 2
    try:
        return _COMMANDS[args.command](args, config)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
