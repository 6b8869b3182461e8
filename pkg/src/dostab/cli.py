"""``dostab`` command line.

Exit codes: 0 success, 1 domain error (bad input, rejected operation),
2 I/O error. Mutating subcommands hold ``<ledger>.lock`` while they run and
replace the ledger file atomically, so a failed command leaves it untouched.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys
import tempfile
from pathlib import Path

from filelock import FileLock, Timeout

from . import charts as ch
from .core import IdentityProof, ProposalKind
from .errors import ConfigError, DostabError
from .ledger import VoteLedger
from .metrics import niwa_series, score_row, scores_csv
from .serialize import parse_ledger, serialise_ledger
from .sim import DriftingSamplerConfig, parse_settings, run_experiment
from .triggers import proof_from_dict

CHART_FILES = ("i_chart", "mr_chart", "ewma_chart")


class _IOFailure(Exception):
    pass


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def load_ledger(path) -> VoteLedger:
    return parse_ledger(Path(path).read_text(encoding="utf-8"))


@contextlib.contextmanager
def mutate(path):
    """Yield the ledger stored at ``path``; write it back only if the block succeeds."""
    path = Path(path)
    try:
        with FileLock(str(path) + ".lock", timeout=10):
            ledger = load_ledger(path)
            yield ledger
            write_atomic(path, serialise_ledger(ledger))
    except Timeout as e:
        raise _IOFailure(f"ledger is locked by another process: {e}") from None


# -- subcommands ---------------------------------------------------------------

def cmd_init(a):
    path = Path(a.ledger)
    if path.exists() and not a.force:
        raise DostabError(f"{path} already exists (use --force to overwrite)")
    ledger = VoteLedger(a.ea_token, frozenset(a.oracle or ()), a.blocks_per_interval, a.start_height)
    write_atomic(path, serialise_ledger(ledger))


def cmd_propose(a):
    with mutate(a.ledger) as led:
        led.add_proposal(a.ea_token, a.id, a.question, ProposalKind(a.kind))


def cmd_register(a):
    with mutate(a.ledger) as led:
        led.register_stakeholder(a.ea_token, a.id, a.weight, a.credential)


def cmd_assign_booths(a):
    with mutate(a.ledger) as led:
        booths = led.assign_booths(a.booths, a.seed)
    print(",".join(str(s) for s in booths.sizes()))


def cmd_advance_phase(a):
    with mutate(a.ledger) as led:
        phase = led.advance_phase(a.ea_token)
    print(phase.value)


def cmd_vote(a):
    with mutate(a.ledger) as led:
        led.vote_in_interval(a.proposal, a.interval, a.stakeholder, a.choice,
                             IdentityProof(a.stakeholder, a.credential))


def cmd_tally(a):
    led = load_ledger(a.ledger)
    if a.booth is None:
        t = led.tally_in_interval(a.proposal, a.interval)
    else:
        if led.booths is None:
            raise DostabError("no booth assignment in ledger; run assign-booths first")
        t = led.booth_tally(led.booths, a.booth, a.proposal, a.interval)
    print(",".join(str(v) for v in (*t.counts, t.total)))


def cmd_update_interval(a):
    text = sys.stdin.read() if a.proof == "-" else Path(a.proof).read_text(encoding="utf-8")
    try:
        proof = proof_from_dict(json.loads(text))
    except (ValueError, KeyError, TypeError, AttributeError) as e:
        raise DostabError(f"bad proof document: {e}") from None
    with mutate(a.ledger) as led:
        k = led.update_interval(proof, open_registration=a.open_registration)
    print(k)


def cmd_score(a):
    led = load_ledger(a.ledger)
    t = led.tally_in_interval(a.proposal, a.interval)
    row = score_row(t)[2:]  # T1..T5, T, NWA, NIWA
    print(",".join(str(v) for v in row))


def _read_series(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "NIWA" not in rows[0]:
        raise DostabError(f"{path}: expected a CSV with a NIWA column")
    try:
        return [float(r["NIWA"]) for r in rows]
    except ValueError as e:
        raise DostabError(f"{path}: {e}") from None


def cmd_chart(a):
    if a.input:
        series = _read_series(a.input)
    else:
        series = [float(s) for s in niwa_series(load_ledger(a.ledger), a.proposal)]
    kind = a.kind.upper()
    if kind == "I":
        chart = ch.i_chart(series)
    elif kind == "MR":
        chart = ch.mr_chart(series)
    else:
        chart = ch.ewma_chart(series, ch.EwmaConfig(a.lam))
    text = ch.chart_json(chart) if a.format == "json" else ch.chart_csv(chart)
    if a.out:
        write_atomic(Path(a.out), text)
    else:
        sys.stdout.write(text)


def violations_doc(settings, result) -> dict:
    s = settings.sampler
    cfg = {"sampler": "drift" if isinstance(s, DriftingSamplerConfig) else "uniform",
           "voters": s.voters, "intervals": s.intervals, "seed": s.seed,
           "ewma_lambda": settings.ewma.lam, "blocks_per_interval": settings.blocks_per_interval}
    if isinstance(s, DriftingSamplerConfig):
        cfg.update(initial_p=list(s.initial_p), step_up=s.step_up, step_down=s.step_down)
    doc = {"config": cfg, "chart_error": result.chart_error}
    for name, found in result.violations.items():
        doc[name] = [{"index": k, "side": side.value} for k, side in found]
    doc["stable"] = result.chart_error is None and not any(result.violations.values())
    return doc


def cmd_simulate(a):
    cfg_path = Path(a.config)
    try:
        cfg_text = cfg_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {cfg_path}: {e.strerror or e}") from None
    settings = parse_settings(cfg_text, a.seed)
    result = run_experiment(settings.sampler, settings.ewma, settings.blocks_per_interval)

    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    write_atomic(out / "niwa.csv", scores_csv(result.tallies))
    for name in CHART_FILES:
        chart = getattr(result, name)
        if chart is not None:
            write_atomic(out / f"{name}.csv", ch.chart_csv(chart))
            if settings.svg or a.svg:
                ch.render_svg(chart, out / f"{name}.svg")
    write_atomic(out / "violations.json",
                 json.dumps(violations_doc(settings, result), indent=2, sort_keys=True) + "\n")
    if result.chart_error:
        print(f"warning: charts skipped: {result.chart_error}", file=sys.stderr)
    print(out)


def cmd_report(a):
    out = Path(a.dir)
    doc = json.loads((out / "violations.json").read_text(encoding="utf-8"))
    series = _read_series(out / "niwa.csv")
    c = doc.get("config", {})
    print(f"experiment: {c.get('sampler')} sampler, {c.get('voters')} voters, "
          f"{c.get('intervals')} intervals, seed {c.get('seed')}")
    print(f"NIWA: first {series[0]:.4f}, last {series[-1]:.4f}, "
          f"mean {sum(series) / len(series):.4f}")
    if doc.get("chart_error"):
        print(f"charts: not computed ({doc['chart_error']})")
        return
    for name in CHART_FILES:
        found = doc.get(name, [])
        # 1-based interval numbers for humans
        desc = ", ".join(f"interval {v['index'] + 1} {v['side']}" for v in found) or "none"
        print(f"{name}: {len(found)} out-of-control point(s): {desc}")
    print("process stable" if doc.get("stable") else "process NOT stable")


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dostab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("init", help="create an empty ledger file")
    s.add_argument("ledger")
    s.add_argument("--ea-token", required=True)
    s.add_argument("--oracle", action="append", help="EA oracle credential (repeatable)")
    s.add_argument("--blocks-per-interval", type=int, default=16)
    s.add_argument("--start-height", type=int, default=0)
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=cmd_init)

    s = sub.add_parser("propose", help="add a proposal")
    s.add_argument("ledger")
    s.add_argument("--ea-token", required=True)
    s.add_argument("--id", type=int, required=True)
    s.add_argument("--kind", default="Generic", choices=[k.value for k in ProposalKind])
    s.add_argument("--question", default="")
    s.set_defaults(func=cmd_propose)

    s = sub.add_parser("register", help="register a stakeholder")
    s.add_argument("ledger")
    s.add_argument("--ea-token", required=True)
    s.add_argument("--id", required=True)
    s.add_argument("--weight", type=int, default=1)
    s.add_argument("--credential")
    s.set_defaults(func=cmd_register)

    s = sub.add_parser("assign-booths", help="randomly partition stakeholders into booths")
    s.add_argument("ledger")
    s.add_argument("--booths", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_assign_booths)

    s = sub.add_parser("advance-phase", help="Registration -> Voting -> Tallying")
    s.add_argument("ledger")
    s.add_argument("--ea-token", required=True)
    s.set_defaults(func=cmd_advance_phase)

    s = sub.add_parser("vote", help="cast or replace a vote in the open interval")
    s.add_argument("ledger")
    s.add_argument("--proposal", type=int, required=True)
    s.add_argument("--interval", type=int, required=True)
    s.add_argument("--stakeholder", required=True)
    s.add_argument("--choice", type=int, required=True)
    s.add_argument("--credential", required=True)
    s.set_defaults(func=cmd_vote)

    s = sub.add_parser("tally", help="print T1..T5,T for an interval (optionally one booth)")
    s.add_argument("ledger")
    s.add_argument("--proposal", type=int, required=True)
    s.add_argument("--interval", type=int, required=True)
    s.add_argument("--booth", type=int)
    s.set_defaults(func=cmd_tally)

    s = sub.add_parser("update-interval", help="open the next interval with an elapsed-time proof")
    s.add_argument("ledger")
    s.add_argument("--proof", required=True, help="proof JSON file, or - for stdin")
    s.add_argument("--open-registration", action="store_true")
    s.set_defaults(func=cmd_update_interval)

    s = sub.add_parser("score", help="print T1..T5,T,NWA,NIWA for an interval")
    s.add_argument("ledger")
    s.add_argument("--proposal", type=int, required=True)
    s.add_argument("--interval", type=int, required=True)
    s.set_defaults(func=cmd_score)

    s = sub.add_parser("chart", help="control chart from a NIWA csv or a ledger")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="CSV with a NIWA column (e.g. niwa.csv)")
    src.add_argument("--ledger")
    s.add_argument("--proposal", type=int, default=0)
    s.add_argument("--kind", default="I", type=str.upper, choices=["I", "MR", "EWMA"])
    s.add_argument("--lam", type=float, default=0.2)
    s.add_argument("--format", default="csv", choices=["csv", "json"])
    s.add_argument("--out")
    s.set_defaults(func=cmd_chart)

    s = sub.add_parser("simulate", help="run a synthetic experiment end to end")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--svg", action="store_true")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("report", help="summarise a simulate output directory")
    s.add_argument("dir")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except DostabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, _IOFailure) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
