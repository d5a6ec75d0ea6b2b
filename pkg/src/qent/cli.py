"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 failed verification,
3 I/O or parse failure. Numbers are printed in nats with 12 digits after
the decimal point, independent of locale.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import capacity as cap
from . import channels, entangle, entropy, states, verification
from .errors import ValidationError

log = logging.getLogger("qent")

EXIT_OK, EXIT_VALIDATION, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class ParseFailure(Exception):
    pass


def fmt(x: float) -> str:
    if abs(x) < 5e-13:
        x = 0.0
    return f"{x:.12f}"


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"cannot read {path}: {exc}") from exc


def _parse(loader, path: str):
    obj = _load_json(path)
    try:
        return loader(obj)
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseFailure(f"malformed file {path}: {exc!r}") from exc


def load_state(path: str) -> states.DensityOperator:
    return _parse(states.state_from_json, path)


def load_channel(path: str) -> channels.KrausChannel:
    return _parse(channels.channel_from_json, path)


def _write_json(obj: dict, path: str) -> None:
    try:
        Path(path).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ParseFailure(f"cannot write {path}: {exc}") from exc


def _cfg(args) -> cap.OptimizerConfig:
    kw = {"seed": args.seed}
    if getattr(args, "restarts", None) is not None:
        kw["restarts"] = args.restarts
    if getattr(args, "tol", None) is not None:
        kw["tol"] = args.tol
    return cap.OptimizerConfig(**kw)


# ---------------------------------------------------------------------------
# commands


def cmd_entropy(args) -> int:
    rho = load_state(args.state)
    s = entropy.von_neumann(rho)
    print(f"S={fmt(s)} S_q={fmt(entropy.q_entropy(rho))}")
    return EXIT_OK


def cmd_compound(args) -> int:
    rho = load_state(args.state)
    if args.type == "standard":
        w = entangle.standard_compound(rho)
    else:
        if args.ensemble:
            ens = _parse(states.ensemble_from_json, args.ensemble)
        else:
            ens = states.schatten_decompose(rho)
        w = entangle.d_compound(ens) if args.type == "d" else entangle.o_compound(ens)
    _write_json(entangle.compound_to_json(w), args.output)
    print(f"I={fmt(entropy.mutual_entropy(w))}")
    return EXIT_OK


def cmd_mutual(args) -> int:
    w = _parse(entangle.compound_from_json, args.compound)
    cond = entropy.conditional_and_disentanglement(w)
    print(
        f"I={fmt(entropy.mutual_entropy(w))} S_q_cond={fmt(cond.q_conditional)} "
        f"D={fmt(cond.disentanglement)}"
    )
    return EXIT_OK


def cmd_channel_apply(args) -> int:
    ch = load_channel(args.channel)
    rho = load_state(args.state)
    out = channels.apply_state(ch, rho)
    _write_json(states.state_to_json(out), args.output)
    print(f"S_out={fmt(entropy.von_neumann(out))}")
    return EXIT_OK


def _argmax_json(report: cap.InfoReport) -> dict:
    out = {"kind": report.kind, "value": report.value, "iterations": report.iterations,
           "converged": report.converged}
    if isinstance(report.argmax, states.Ensemble):
        out["argmax"] = states.ensemble_to_json(report.argmax)
    elif isinstance(report.argmax, entangle.CompoundState):
        out["argmax"] = entangle.compound_to_json(report.argmax)
    if report.input_state is not None:
        out["input_state"] = states.state_to_json(report.input_state)
    return out


def cmd_info(args) -> int:
    rho = load_state(args.state)
    ch = load_channel(args.channel)
    report = cap.info(rho, ch, args.kind, _cfg(args))
    print(f"I_{args.kind}={fmt(report.value)}")
    if args.dump:
        _write_json(_argmax_json(report), args.dump)
    return EXIT_OK


def cmd_capacity(args) -> int:
    ch = load_channel(args.channel)
    report = cap.capacity(ch, args.kind, _cfg(args))
    print(f"C_{args.kind}={fmt(report.value)} converged={report.converged}")
    if args.dump:
        _write_json(_argmax_json(report), args.dump)
    return EXIT_OK


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "I_q", "I_d", "I_o"])
    for r in rows:
        writer.writerow([fmt(r["param"]), fmt(r["q"]), fmt(r["d"]), fmt(r["o"])])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    if args.family not in channels.FAMILIES:
        raise channels.UnknownChannel(
            f"unknown family {args.family!r}; known: {list(channels.FAMILIES)}"
        )
    rho = load_state(args.state)
    params = cap.grid(args.start, args.stop, args.step)
    rows = cap.sweep(args.family, params, rho, _cfg(args))
    text = sweep_csv(rows)
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ParseFailure(f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    dims = [int(x) for x in args.dims.split(",") if x.strip()]
    if not dims or any(d not in (2, 3, 4) for d in dims):
        raise ValidationError(f"dims must be drawn from 2,3,4; got {args.dims}")
    if args.trials == 0:
        log.warning("trials=0: nothing to check, vacuous pass")
    extra = [lambda p=p: load_channel(p) for p in (args.channel or [])]
    res = verification.run_suite(
        dims, args.trials, args.seed, opt_trials=args.opt_trials, extra_channels=extra
    )
    for name, (ok, bad) in sorted(res.counts.items()):
        print(f"{'PASS' if bad == 0 else 'FAIL'} {name}: {ok} passed, {bad} failed")
    if res.ok:
        print("all checks passed")
        return EXIT_OK
    for line in res.failures:
        print(f"failure: {line}")
    return EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qent", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def optim(sp, with_tol=False):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--restarts", type=int)
        if with_tol:
            sp.add_argument("--tol", type=float)

    sp = sub.add_parser("entropy", help="von Neumann entropy and q-entropy of a state")
    sp.add_argument("--state", required=True)
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("compound", help="build a standard, d- or o-compound state")
    sp.add_argument("type", choices=["standard", "d", "o"])
    sp.add_argument("--state", required=True)
    sp.add_argument("--ensemble", help="ensemble file; defaults to the Schatten decomposition")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_compound)

    sp = sub.add_parser("mutual", help="mutual entropy of a compound state")
    sp.add_argument("--compound", required=True)
    sp.set_defaults(func=cmd_mutual)

    sp = sub.add_parser("channel-apply", help="apply a Kraus channel to a state")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_channel_apply)

    sp = sub.add_parser("info", help="I_q, I_d or I_o for a fixed input state")
    sp.add_argument("--state", required=True)
    sp.add_argument("--channel", required=True)
    sp.add_argument("--kind", choices=cap.KINDS, required=True)
    sp.add_argument("--dump", help="write the maximizing decomposition as JSON")
    optim(sp)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("capacity", help="C_q, C or C_o of a channel")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--kind", choices=cap.KINDS, required=True)
    sp.add_argument("--dump")
    optim(sp, with_tol=True)
    sp.set_defaults(func=cmd_capacity)

    sp = sub.add_parser("sweep", help="I_q, I_d, I_o along a channel family, as CSV")
    sp.add_argument("--family", required=True)
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--step", type=float, required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument("--out", required=True)
    optim(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the randomized invariant suite")
    sp.add_argument("--dims", default="2,3")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--opt-trials", type=int, default=4,
                    help="instances per dimension for optimizer-based checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--channel", action="append", help="also check this channel file")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which is reserved for verify failures
        return EXIT_VALIDATION if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
