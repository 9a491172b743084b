"""Command-line interface.

Every command reads a single JSON config document (``--config``, with a
``"schema": 1`` field), writes to stdout or ``--output``, and is
deterministic given the config and seed.  Numbers are printed with 15
significant digits; CSV uses ``,`` delimiters, ``.`` decimals and always
carries a header.

Exit codes: 0 ok, 1 validation-panel failure, 2 config parse error,
3 physics validation error, 4 degenerate optimizer input.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .channels import channel_from_dict, channel_shift, channel_symplectic
from .core import complex_to_real, complex_to_real_matrix, l_matrix, \
    state_from_dict
from .errors import DegenerateBudgetError, GaussQfiError
from .optimizer import EnergyBudget, OptimizerConfig, optimize_probe, scaling_exponent
from .probes import OneModeProbeParams, probe_params_from_dict, \
    probe_params_to_dict
from .qfi import ProbeState, qfi_unitary
from . import formulas, validate

EXIT_OK = 0
EXIT_PANEL_FAILURE = 1
EXIT_PARSE = 2
EXIT_PHYSICS = 3
EXIT_DEGENERATE = 4


class ConfigError(Exception):
    """Config file is malformed (maps to exit code 2)."""


def _fmt(x: float) -> str:
    return f"{float(x):.15g}"


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(obj))
    if isinstance(obj, (int, np.integer, bool, str)) or obj is None:
        return obj
    raise ConfigError(f"cannot serialize {type(obj)!r}")


def _dump_json(obj) -> str:
    return json.dumps(_json_ready(obj), indent=2) + "\n"


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if data.get("schema") != 1:
        raise ConfigError("config must declare \"schema\": 1")
    return data


def _require(config: dict, key: str):
    if key not in config:
        raise ConfigError(f"config is missing the {key!r} field")
    return config[key]


def _parse_channel(config: dict):
    raw = _require(config, "channel")
    try:
        return channel_from_dict(raw)
    except GaussQfiError as exc:
        raise ConfigError(f"bad channel: {exc}") from exc


def _parse_probe(config: dict):
    """Returns (ProbeState, params-or-None). Parse errors raise
    ConfigError; physics violations raise GaussQfiError (exit 3)."""
    raw = _require(config, "probe")
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ConfigError("probe must be an object with a 'kind' field")
    if raw["kind"] in ("one-mode", "two-mode"):
        try:
            params = probe_params_from_dict(raw)
        except GaussQfiError as exc:
            raise ConfigError(f"bad probe: {exc}") from exc
        return params.to_probe_state(), params
    if raw["kind"] == "state":
        try:
            state = state_from_dict(raw)
        except GaussQfiError as exc:
            raise ConfigError(f"bad probe state: {exc}") from exc
        return ProbeState.from_state(state), None
    raise ConfigError(f"unknown probe kind {raw['kind']!r}")


# ---------------------------------------------------------------------------
# Commands

def cmd_qfi(config: dict, args) -> str:
    probe, _ = _parse_probe(config)
    channel = _parse_channel(config)
    return _dump_json(qfi_unitary(probe, channel).to_dict())


_CLOSED_FORMS = {
    "eq19": ("one-mode", lambda p, c: formulas.qfi_one_mode_combined(
        p, c.get("omega_p", 0.0), c.get("omega_s", 0.0), c.get("chi", 0.0))),
    "eq20": ("one-mode", lambda p, c: formulas.qfi_phase(p)),
    "eq21": ("one-mode", lambda p, c: formulas.qfi_squeeze1(p, c.get("chi", 0.0))),
    "eq28": ("two-mode", lambda p, c: formulas.qfi_twomode_squeeze_separable(p, c.get("chi", 0.0))),
    "eq30": ("two-mode", lambda p, c: formulas.qfi_twomode_squeeze_bs(p, c.get("chi", 0.0))),
    "eq36": ("two-mode", lambda p, c: formulas.qfi_mix_separable(p, c.get("chi", 0.0))),
    "eq38": ("two-mode", lambda p, c: formulas.qfi_mix_bs(p, c.get("chi", 0.0))),
    "appC-st": ("two-mode", lambda p, c: formulas.qfi_twomode_squeeze_full(p, c.get("chi", 0.0))),
    "appC-mix": ("two-mode", lambda p, c: formulas.qfi_mix_full(p, c.get("chi", 0.0))),
}


def cmd_closed_form(config: dict, args) -> str:
    label = _require(config, "label")
    if label == "universal-mix":
        value = formulas.universal_mix_probe_qfi(
            float(config.get("r", 0.0)), float(config.get("d1_mag", 0.0)),
            float(config.get("d2_mag", 0.0)))
        return _dump_json({"label": label, "value": value})
    if label not in _CLOSED_FORMS:
        raise ConfigError(f"unknown closed-form label {label!r}; "
                          f"known: {sorted(_CLOSED_FORMS)} and 'universal-mix'")
    expected_kind, func = _CLOSED_FORMS[label]
    _, params = _parse_probe(config)
    if params is None:
        raise ConfigError("closed-form evaluation needs a parametric probe")
    actual = "one-mode" if isinstance(params, OneModeProbeParams) else "two-mode"
    if actual != expected_kind:
        raise ConfigError(f"label {label!r} needs a {expected_kind} probe")
    return _dump_json({"label": label, "value": func(params, config)})


SWEEP_HEADER = "value,r_term,q_term,eigen_term,disp_term,total"


def _sweep_row(config: dict, path: str, value: float) -> str:
    parts = path.split(".")
    patched = json.loads(json.dumps(config))
    target = patched
    for key in parts[:-1]:
        target = target[key]
    target[parts[-1]] = value
    try:
        probe, _ = _parse_probe(patched)
        channel = _parse_channel(patched)
        b = qfi_unitary(probe, channel)
    except (GaussQfiError, ConfigError):
        return f"{_fmt(value)},error,error,error,error,error"
    return ",".join([_fmt(value), _fmt(b.r_term), _fmt(b.q_term),
                     _fmt(b.eigen_term), _fmt(b.disp_term), _fmt(b.total)])


def cmd_sweep(config: dict, args) -> str:
    spec = _require(config, "sweep")
    if not isinstance(spec, dict):
        raise ConfigError("sweep must be an object")
    path = _require(spec, "parameter")
    grid = _require(spec, "grid")
    if not isinstance(grid, list) or not grid:
        raise ConfigError("sweep grid must be a non-empty list")
    grid = [float(v) for v in grid]
    if not all(np.isfinite(grid)):
        raise ConfigError("sweep grid must contain finite values")
    root = path.split(".")[0]
    if root not in ("probe", "channel"):
        raise ConfigError("sweep parameter must start with 'probe.' or 'channel.'")
    _require(config, "probe")
    _require(config, "channel")
    jobs = args.jobs or 1
    work = [(config, path, v) for v in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row_tuple, work))
    else:
        rows = [_sweep_row(*w) for w in work]
    return SWEEP_HEADER + "\n" + "\n".join(rows) + "\n"


def _sweep_row_tuple(work):
    return _sweep_row(*work)


def cmd_optimize(config: dict, args) -> str:
    channel = _parse_channel(config)
    family = config.get("family", "one-mode" if channel.modes == 1
                        else "two-mode-restricted")
    if family not in ("one-mode", "two-mode-restricted"):
        raise ConfigError(f"unknown probe family {family!r}")
    if channel.modes != (1 if family == "one-mode" else 2):
        raise ConfigError(f"family {family!r} does not match a "
                          f"{channel.modes}-mode channel")
    budget_raw = _require(config, "budget")
    if not isinstance(budget_raw, dict) or "n_total" not in budget_raw:
        raise ConfigError("budget must be an object with 'n_total'")
    n_total = float(budget_raw["n_total"])
    modes = 1 if family == "one-mode" else 2
    try:
        budget = EnergyBudget(n_total, tuple(((0.0, 0.0),) * modes))
    except GaussQfiError as exc:
        raise ConfigError(f"bad budget: {exc}") from exc
    opt_config = OptimizerConfig.from_dict(config.get("optimizer", {}))
    if args.seed is not None:
        opt_config = OptimizerConfig(opt_config.restarts, opt_config.max_iter,
                                     args.seed, opt_config.tol)
    constraint = config.get("constraint")
    result = optimize_probe(channel, family, budget, opt_config,
                            constraint=constraint, jobs=args.jobs or 1)
    payload = {
        "best_qfi": result.best_qfi,
        "best_params": {
            "family": result.best_params["family"],
            "probe": probe_params_to_dict(result.best_params["probe"]),
            "splits": [list(s) for s in result.best_params["splits"]],
            "mode_fractions": list(result.best_params["mode_fractions"]),
        },
        "restarts": result.restarts,
        "converged": result.converged,
        "trace": [[i, v] for i, v in result.trace],
    }
    return _dump_json(payload)


def cmd_scaling(config: dict, args) -> str:
    channel = _parse_channel(config)
    family = _require(config, "family")
    grid = _require(config, "n_grid")
    if not isinstance(grid, list) or len(grid) < 4:
        raise ConfigError("n_grid must be a list with at least 4 points")
    fit = scaling_exponent(channel, family, [float(v) for v in grid])
    return _dump_json({"exponent": fit.exponent, "prefactor": fit.prefactor,
                       "n_grid": list(fit.n_grid), "qfi_values": list(fit.qfi_values)})


ELLIPSE_HEADER = "name,row,col,value"


def _emit_matrix(rows: list, name: str, matrix: np.ndarray):
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            rows.append(f"{name},{i},{j},{_fmt(matrix[i, j])}")


def cmd_ellipse(config: dict, args) -> str:
    probe, _ = _parse_probe(config)
    channel = _parse_channel(config)
    if probe.modes != channel.modes:
        raise ConfigError("probe and channel mode counts differ")
    eps = float(config.get("epsilon", 0.0))
    d_re, sigma_re = complex_to_real(probe.to_state())
    s_re = complex_to_real_matrix(channel_symplectic(channel, eps).matrix)
    b = channel_shift(channel, eps)
    b_re = (l_matrix(channel.modes) @ b).real
    sigma_after = s_re @ sigma_re @ s_re.T
    d_after = s_re @ d_re + b_re
    rows = []
    _emit_matrix(rows, "sigma_re_before", sigma_re)
    _emit_matrix(rows, "sigma_re_after", sigma_after)
    _emit_matrix(rows, "d_re_before", d_re.reshape(-1, 1))
    _emit_matrix(rows, "d_re_after", d_after.reshape(-1, 1))
    if probe.modes == 2:
        for name, mat in (("before", sigma_re), ("after", sigma_after)):
            _emit_matrix(rows, f"xx_marginal_{name}", mat[:2, :2])
            _emit_matrix(rows, f"pp_marginal_{name}", mat[2:, 2:])
    return ELLIPSE_HEADER + "\n" + "\n".join(rows) + "\n"


LIMITS_HEADER = "channel,n,heisenberg,shotnoise"


def cmd_limits(config: dict, args) -> str:
    ns = [0.5, 1.0, 2.0, 5.0, 10.0]
    if config is not None:
        raw = config.get("n", ns)
        if not isinstance(raw, list) or not raw:
            raise ConfigError("'n' must be a non-empty list")
        ns = [float(v) for v in raw]
    rows = []
    for kind, table in formulas.limit_table().items():
        for n in ns:
            rows.append(f"{kind},{_fmt(n)},{_fmt(table.heisenberg(n))},"
                        f"{_fmt(table.shotnoise(n))}")
    return LIMITS_HEADER + "\n" + "\n".join(rows) + "\n"


def cmd_validate(args) -> tuple:
    results = validate.run_panels(panel=args.panel, seed=args.seed or 20240,
                                  draws=args.draws)
    report = validate.format_report(results) + "\n"
    ok = all(r.passed for r in results)
    return report, EXIT_OK if ok else EXIT_PANEL_FAILURE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussqfi",
        description="Quantum Fisher information for Gaussian probes of "
                    "Gaussian unitary channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, helptext, needs_config=True):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="path to the JSON config document",
                       required=needs_config)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--output", default=None,
                       help="output path (default: stdout)")
        return p

    add("qfi", "QFI breakdown for a probe/channel configuration")
    add("closed-form", "evaluate a named closed-form expression")
    add("sweep", "QFI along a parameter grid (CSV)")
    add("optimize", "maximize QFI over a probe family at fixed energy")
    add("scaling", "fit the QFI scaling exponent over an energy grid")
    add("ellipse", "real-form covariance data before/after the channel (CSV)")
    add("limits", "Heisenberg/shot-noise limit table (CSV)", needs_config=False)
    v = add("validate", "run the cross-validation panels", needs_config=False)
    v.add_argument("--panel", choices=("all", "oracle", "fock"), default="all")
    v.add_argument("--draws", type=int, default=200)
    return parser


_HANDLERS = {
    "qfi": cmd_qfi,
    "closed-form": cmd_closed_form,
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "scaling": cmd_scaling,
    "ellipse": cmd_ellipse,
    "limits": cmd_limits,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            text, code = cmd_validate(args)
        else:
            config = _load_config(args.config) if args.config else None
            text = _HANDLERS[args.command](config, args)
            code = EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except GaussQfiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
