"""Command-line front end.

SNR lists are always ordered (SNR11, SNR12, SNR21, SNR22): receiver gains of
transmitters 1 and 2, then harvester gains of transmitters 1 and 2.

Exit codes: 0 success, 1 usage or parse error (or a failed ``check``),
2 infeasible configuration, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import dmc, gaussian, gmac_game as game, gmac_region as region, io, mc_sim
from .checks import run_checks
from .core import (
    ConvergenceError,
    DiscreteEhChannel,
    EnergyConservationError,
    GmacConfig,
    InfeasibleEnergyError,
    PowerSplit,
    SeitError,
    bsc,
    noiseless_binary,
    z_channel,
)
from .geometry import convex_hull

DECODER_NAMES = {d.value: d for d in game.Decoder}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_floats(value, count=None, what="value"):
    if isinstance(value, (list, tuple)):
        out = [float(v) for v in value]
    else:
        try:
            out = [float(v) for v in str(value).split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"cannot parse {what} {value!r}") from None
    if count is not None and len(out) != count:
        raise UsageError(f"{what} needs {count} comma-separated numbers, got {value!r}")
    return out


def parse_grid(value):
    """``start:stop:step`` (endpoints inclusive within 1e-12), a number, or a list."""
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    text = str(value)
    if ":" not in text:
        return parse_floats(text, what="grid")
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:step, got {text!r}")
    start, stop, step = parse_floats(",".join(parts), 3, "grid")
    if step <= 0 or stop < start:
        raise UsageError(f"grid needs step > 0 and stop >= start, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    values = [round(start + i * step, 12) for i in range(count)]
    if stop - values[-1] > 1e-12 and abs(stop - values[-1] - step) <= 1e-12:
        values.append(stop)
    return values


def _gmac(args):
    snr = parse_floats(args.snr, 4, "--snr")
    if args.snr_db:
        return GmacConfig.from_db(*snr)
    return GmacConfig(*snr)


def _split(value, what):
    b1, b2 = parse_floats(value, 2, what)
    return PowerSplit(b1, b2)


def _workers_map(fn, items):
    workers = mc_sim.worker_count()
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def load_channel_file(path):
    """JSON channel: ``{"law": P[x][y][s], "energy": omega}`` or ``{"p_y_given_x": W}``.

    The second form is co-located (S = Y) with omega(s) = s unless
    ``energy`` is given. ``law`` may also be a 2-D matrix over joint (y, s)
    with ``receiver_output_size`` and ``harvester_output_size``.
    """
    data = json.loads(Path(path).read_text())
    if "p_y_given_x" in data:
        return DiscreteEhChannel.colocated(data["p_y_given_x"], data.get("energy"))
    law = np.asarray(data["law"], dtype=float)
    if law.ndim == 2:
        return DiscreteEhChannel.from_matrix(
            law, int(data["receiver_output_size"]), int(data["harvester_output_size"]), data["energy"]
        )
    return DiscreteEhChannel(law, data["energy"])


def _dmc_channel(args):
    name = args.channel
    if name == "noiseless-binary":
        return noiseless_binary(), dmc.closed_form_noiseless_binary
    if name == "bsc":
        if args.p is None:
            raise UsageError("bsc needs --p")
        closed = (lambda b: dmc.closed_form_bsc(args.p, b)) if args.p <= 0.5 else None
        return bsc(args.p), closed
    if name == "z":
        if args.eps is None:
            raise UsageError("z needs --eps")
        return z_channel(args.eps), lambda b: dmc.closed_form_z_channel(args.eps, b)
    path = args.channel_file or name
    if not Path(path).exists():
        raise UsageError(f"unknown channel {name!r} (expected noiseless-binary, bsc, z or a JSON file)")
    return load_channel_file(path), None


def cmd_p2p_dmc(args):
    channel, closed = _dmc_channel(args)
    settings = dmc.SolverSettings(ba_tolerance=args.ba_tol, ba_max_iterations=args.max_iter)
    grid = parse_grid(args.b_grid)
    b_max = dmc.max_feasible_energy(channel)
    for b in grid:
        if b > b_max + 1e-12 * max(1.0, b_max):
            raise InfeasibleEnergyError(b, b_max)
    points = _workers_map(lambda b: dmc.capacity_energy_function(channel, b, settings), grid)
    prob_cols = [f"p_x{i}" for i in range(channel.input_size)]
    rows = []
    for b, point in zip(grid, points):
        row = {
            "b": b,
            "capacity_solver": point.capacity,
            "capacity_closed_form": closed(b) if closed else None,
            "lambda": point.lagrange_multiplier,
            "energy": point.energy,
            "converged": point.converged,
        }
        row.update(zip(prob_cols, point.optimal_input.probs.tolist()))
        rows.append(row)
    columns = ["b", "capacity_solver", "capacity_closed_form", "lambda", "energy", "converged", *prob_cols]
    return columns, rows, {"b_max": b_max}


def cmd_p2p_gaussian(args):
    cfg = gaussian.GaussianP2pConfig(args.snr1, args.snr2)
    rows = [{"b": b, "capacity": gaussian.p2p_info_energy_capacity(cfg, b)} for b in parse_grid(args.b_grid)]
    return ["b", "capacity"], rows, {"b_max": gaussian.p2p_max_energy(cfg)}


def cmd_mac_region(args):
    cfg = _gmac(args)
    samples = region.trace_boundary(cfg, args.b, args.grid_steps)
    rows = []
    corners = []
    for i, sample in enumerate(samples):
        for j, (r1, r2) in enumerate(sample.corner_rates):
            corners.append((r1, r2))
            rows.append({
                "kind": "corner", "sample": i, "corner": j,
                "beta1": sample.split.beta1, "beta2": sample.split.beta2,
                "max_energy": sample.max_energy, "r1": r1, "r2": r2,
            })
    for j, (r1, r2) in enumerate(convex_hull(corners)):
        rows.append({"kind": "hull", "corner": j, "r1": r1, "r2": r2})
    sum_rate, split = region.sum_rate_at_energy(cfg, args.b)
    meta = {
        "b": args.b,
        "b_max": region.mac_max_feasible_energy(cfg),
        "sum_rate_max": sum_rate,
        "sum_rate_beta1": split.beta1,
        "sum_rate_beta2": split.beta2,
    }
    return ["kind", "sample", "corner", "beta1", "beta2", "max_energy", "r1", "r2"], rows, meta


def _decoders(value):
    if value == "all":
        return tuple(game.Decoder)
    try:
        return tuple(DECODER_NAMES[v] for v in value.split(","))
    except KeyError:
        raise UsageError(f"unknown decoder in {value!r} (use sud, sic12, sic21 or all)") from None


def cmd_ne_region(args):
    cfg = _gmac(args)
    result = game.ne_region_union(cfg, args.b, args.samples, _decoders(args.decoder))
    rows = [
        {
            "kind": "point", "decoder": p.decoder.value, "regime": p.regime.value,
            "beta1": p.split.beta1, "beta2": p.split.beta2,
            "r1": p.rates.r1, "r2": p.rates.r2, "energy": p.rates.b,
        }
        for p in result.points
    ]
    rows += [{"kind": "hull", "decoder": "union", "r1": r1, "r2": r2} for r1, r2 in result.hull]
    meta = {"b": args.b, "b_max": region.mac_max_feasible_energy(cfg), "eta": game.rate_lipschitz(cfg) * 0.01}
    return ["kind", "decoder", "regime", "beta1", "beta2", "r1", "r2", "energy"], rows, meta


def cmd_best_response(args):
    cfg = _gmac(args)
    decoder = _decoders(args.decoder)
    if len(decoder) != 1:
        raise UsageError("best-response needs a single decoder")
    g = game.GameConfig(cfg, args.b, decoder[0], args.eta)
    run = game.best_response_dynamics(g, _split(args.init, "--init"), args.grid_step, args.max_iters)
    rows = []
    for step, split in enumerate(run.trajectory):
        u1, u2 = game.utility(g, split)
        rows.append({"step": step, "beta1": split.beta1, "beta2": split.beta2, "u1": u1, "u2": u2})
    gains = game.verify_eta_ne(g, run.terminal, args.grid_step)
    meta = {
        "converged": run.converged, "certified": run.certified, "rounds": run.rounds,
        "eta": g.eta, "gain1": gains[0], "gain2": gains[1],
    }
    return ["step", "beta1", "beta2", "u1", "u2"], rows, meta


def cmd_simulate(args):
    gains = powers = None
    if args.gains is not None or args.powers is not None:
        gains = tuple(parse_floats(args.gains, 4, "--gains"))
        powers = tuple(parse_floats(args.powers, 2, "--powers"))
        cfg = GmacConfig(0, 0, 0, 0)
    else:
        cfg = _gmac(args)
    sim = mc_sim.SimConfig(
        cfg=cfg, split=_split(args.beta, "--beta"), block_length=args.n, b_target=args.b_target,
        epsilon_slack=args.eps, trials=args.trials, seed=args.seed, gains=gains, powers=powers,
    )
    report = mc_sim.simulate_blocks(sim)
    payload = {"report": report.to_dict()}
    if args.b_grid is not None:
        curve = mc_sim.outage_curve(sim, parse_grid(args.b_grid), report)
        payload["outage_curve"] = [{"b": b, "outage_fraction": f} for b, f in curve]
    return payload


def _common(p, snr=True):
    if snr:
        p.add_argument("--snr", help="SNR11,SNR12,SNR21,SNR22 (linear unless --snr-db)")
        p.add_argument("--snr-db", action="store_true", help="interpret --snr values in dB")
    p.add_argument("--out", help="output file (default: stdout); a .manifest.json sidecar is written next to it")
    p.add_argument("--config", help="JSON config (or a manifest) providing defaults; explicit flags win")


def build_parser():
    parser = _Parser(prog="seit", description="Information-energy limits of SEIT channels.")
    parser.add_argument("--version", action="version", version=f"seit {io.__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("p2p-dmc", help="C(b) of a discrete channel with energy harvester")
    p.add_argument("channel", help="noiseless-binary, bsc, z, or a JSON channel file")
    p.add_argument("--p", type=float, help="BSC crossover probability")
    p.add_argument("--eps", type=float, help="Z-channel crossover probability")
    p.add_argument("--channel-file", help="JSON channel file")
    p.add_argument("--b-grid", default="0:1:0.1", help="start:stop:step, inclusive")
    p.add_argument("--ba-tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10_000)
    _common(p, snr=False)

    p = sub.add_parser("p2p-gaussian", help="C(b) of the Gaussian channel with energy harvester")
    p.add_argument("--snr1", type=float, required=False, default=None)
    p.add_argument("--snr2", type=float, required=False, default=None)
    p.add_argument("--b-grid", default="0:1:0.1")
    _common(p, snr=False)

    p = sub.add_parser("mac-region", help="capacity-region pentagons over feasible power splits")
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--grid-steps", type=int, default=21)
    _common(p)

    p = sub.add_parser("ne-region", help="eta-NE points and their time-sharing hull")
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--decoder", default="all", help="sud, sic12, sic21, comma list, or all")
    p.add_argument("--samples", type=int, default=201)
    _common(p)

    p = sub.add_parser("best-response", help="alternating best-response dynamics")
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--decoder", default="sud")
    p.add_argument("--init", default="1,1", help="initial split beta1,beta2")
    p.add_argument("--grid-step", type=float, default=game.DEFAULT_GRID_STEP)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--eta", type=float, default=None, help="default: Lipschitz bound x grid step")
    _common(p)

    p = sub.add_parser("simulate", help="Monte Carlo energy-rate simulation (JSON report)")
    p.add_argument("--beta", default="1,1", help="power split beta1,beta2")
    p.add_argument("--n", type=int, default=100_000, help="block length")
    p.add_argument("--b-target", type=float, default=0.0)
    p.add_argument("--eps", type=float, default=None, help="outage slack (default 1%% of b-target)")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gains", help="h11,h12,h21,h22 (with --powers) instead of --snr")
    p.add_argument("--powers", help="P1,P2")
    p.add_argument("--b-grid", default=None, help="optional outage-curve floors")
    _common(p)

    p = sub.add_parser("check", help="run the deterministic self-checks")
    return parser


COMMANDS = {
    "p2p-dmc": cmd_p2p_dmc,
    "p2p-gaussian": cmd_p2p_gaussian,
    "mac-region": cmd_mac_region,
    "ne-region": cmd_ne_region,
    "best-response": cmd_best_response,
    "simulate": cmd_simulate,
}

_NOT_CONFIG = {"command", "config", "out"}


def _parse(parser, argv):
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        data = json.loads(Path(args.config).read_text())
        if "config" in data and "command" in data:
            data = data["config"]
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        subparser.set_defaults(**{k: v for k, v in data.items() if k not in _NOT_CONFIG})
        args = parser.parse_args(argv)
    return args


def _resolved_config(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}


def _emit(args, text):
    if args.out:
        io.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    parser = build_parser()
    try:
        args = _parse(parser, argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        if args.command == "check":
            return 0 if run_checks() else 1
        if args.command == "p2p-gaussian" and (args.snr1 is None or args.snr2 is None):
            raise UsageError("p2p-gaussian needs --snr1 and --snr2")
        if getattr(args, "snr", "") is None and args.command != "simulate":
            raise UsageError(f"{args.command} needs --snr")
        config = _resolved_config(args)
        outputs = [args.out] if args.out else []
        manifest = io.build_manifest(args.command, config, getattr(args, "seed", None), outputs)
        if args.command == "simulate":
            if args.snr is None and args.gains is None:
                raise UsageError("simulate needs --snr or --gains/--powers")
            text = io.format_json(manifest, COMMANDS["simulate"](args))
        else:
            columns, rows, meta = COMMANDS[args.command](args)
            text = io.format_csv(manifest, columns, rows, meta)
        _emit(args, text)
        if args.out:
            io.atomic_write_text(io.manifest_path(args.out), json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InfeasibleEnergyError, EnergyConservationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SeitError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
