"""Command-line entry point: ``varuq <command> [options]``.

Every option may also come from ``--config FILE`` (a JSON object keyed by
option name, e.g. ``{"seed": 7, "n_ood": 300}``); flags given on the command
line win. With ``--out DIR`` the artifacts and a ``run.json`` manifest are
written there; otherwise results go to stdout and the manifest to stderr.

Exit codes: 0 success, 1 a checked property failed, 2 usage or schema
error, 3 training diverged.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, kernels
from .axioms import (AXIOMS, GeneratorConfig, check_axiom, check_beta_maximizer, check_corollary,
                     check_proposition_mps_entropy, probe_a2)
from .errors import DivergenceError, SchemaError, VarUQError
from .figure1 import COLUMNS, figure1_table, format_table, table_csv
from .harness import metrics
from .harness.records import dumps_jsonl, load_predictions, write_predictions
from .harness.svg import bar_chart, line_plot
from .harness.synth import SyntheticConfig, synth_run

DEFAULTS = {
    "measure": {"input": None, "format": None, "measures": ",".join(metrics.MEASURES), "weights": None, "labelwise": False},
    "figure1": {"n": 10_000, "streams": 10},
    "axioms": {"family": "all", "cases": 1000, "k_min": 2, "k_max": 6, "atoms_max": 16},
    "arc": {"input": None, "format": None, "measures": "tu_var,tu_ent", "grid": "0:0.99:0.01", "weights": None},
    "ood": {"input": None, "id": None, "ood": None, "format": None, "measures": "eu_var,eu_ent", "weights": None},
    "hist": {"input": None, "format": None, "measures": "tu_var,tu_ent", "bins": 30, "weights": None},
    "synth": {
        "classes": 3, "dim": 2, "radius": 6.0, "ood_radius": 18.0, "n_train": 200, "n_test": 200,
        "n_ood": 600, "members": 5, "bootstrap_fraction": 1.0, "steps": 300, "lr": 0.5, "l2": 1e-3,
        "format": "jsonl",
    },
}
GLOBAL_DEFAULTS = {"seed": 0, "out": None}


class UsageError(VarUQError):
    pass


def _csv_list(text):
    return [t.strip() for t in str(text).split(",") if t.strip()]


def _weights(text):
    if text is None:
        return None
    try:
        return [float(x) for x in _csv_list(text)]
    except ValueError:
        raise UsageError(f"--weights must be comma-separated numbers, got {text!r}") from None


def _measures(text):
    ms = _csv_list(text)
    bad = [m for m in ms if m not in metrics.MEASURES]
    if bad or not ms:
        raise UsageError(f"unknown measure(s) {bad}; choose from {', '.join(metrics.MEASURES)}")
    return ms


def _num(x):
    return repr(float(x))


class Run:
    """Resolved options plus output routing for one invocation."""

    def __init__(self, command, options):
        self.command = command
        self.options = options
        self.out = Path(options["out"]) if options.get("out") else None
        self.files = []
        if self.out:
            self.out.mkdir(parents=True, exist_ok=True)

    def emit(self, name, text, stdout=True):
        if self.out:
            (self.out / name).write_text(text, encoding="utf-8")
            self.files.append(name)
        elif stdout:
            sys.stdout.write(text)

    def manifest(self):
        doc = {
            "command": self.command,
            "options": self.options,
            "version": __version__,
            "backend": kernels.BACKEND,
            "files": sorted(self.files),
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        if self.out:
            (self.out / "run.json").write_text(text, encoding="utf-8")
        else:
            sys.stderr.write("run.json " + json.dumps(doc, sort_keys=True) + "\n")


def _load(opts, key="input"):
    return load_predictions(opts[key], opts.get("format"))


def cmd_measure(run):
    o = run.options
    if not o["input"]:
        raise UsageError("measure needs --in")
    measures = _measures(o["measures"])
    records = _load(o)
    s = metrics.score_all(records, _weights(o["weights"]))
    K = records[0].K
    cols = ["id", "label"] + measures
    if o["labelwise"]:
        cols += [f"{p}_var_{k}" for p in ("tu", "au", "eu") for k in range(K)]
    lines = [",".join(cols)]
    tu, au, eu = s.labelwise
    for i, r in enumerate(records):
        row = [r.id, str(r.label)] + [_num(s[m][i]) for m in measures]
        if o["labelwise"]:
            row += [_num(x) for arr in (tu, au, eu) for x in arr[i]]
        lines.append(",".join(row))
    run.emit("scores.csv", "\n".join(lines) + "\n")
    return 0


def cmd_figure1(run):
    o = run.options
    rows = figure1_table(n=int(o["n"]), seed=int(o["seed"]), n_streams=int(o["streams"]))
    table = format_table(rows)
    sys.stdout.write(table)
    if run.out:
        run.emit("figure1.txt", table)
        run.emit("figure1.csv", table_csv(rows))
        for r in rows:
            svg = bar_chart(
                {"entropy": [r.mean(c) for c in COLUMNS[:3]], "variance (normalized)": [r.mean(c) for c in COLUMNS[3:]]},
                ["TU", "AU", "EU"], title=f"({r.panel}) {r.label}", ylabel="uncertainty",
            )
            run.emit(f"figure1_{r.panel}.svg", svg)
    return 0


def cmd_axioms(run):
    o = run.options
    fams = ["variance", "entropy"] if o["family"] == "all" else [o["family"]]
    for f in fams:
        if f not in ("variance", "entropy"):
            raise UsageError(f"unknown family {f!r}")
    cfg = GeneratorConfig(k_min=int(o["k_min"]), k_max=int(o["k_max"]), atoms_max=int(o["atoms_max"]),
                          cases=int(o["cases"]), seed=int(o["seed"]))
    reports = [check_axiom(a, f, cfg) for f in fams for a in AXIOMS]
    if "entropy" in fams:
        reports.append(check_proposition_mps_entropy(cfg))
    if "variance" in fams:
        reports += [check_beta_maximizer(seed=cfg.seed), check_corollary(seed=cfg.seed)]
    lines = [r.to_line() for r in reports]
    probe = probe_a2(seed=cfg.seed)
    for fam in fams:
        u, v = probe[fam]["uniform"], probe[fam]["vertex_mixture"]
        lines.append(
            f"probe=A2 family={fam} uniform_tu={u['tu']:.6f} uniform_eu={u['eu']:.6f} "
            f"vertex_mixture_tu={v['tu']:.6f} vertex_mixture_eu={v['eu']:.6f}"
        )
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    run.emit("axioms.txt", text, stdout=False)
    return 0 if all(r.ok for r in reports) else 1


def cmd_arc(run):
    o = run.options
    if not o["input"]:
        raise UsageError("arc needs --in")
    measures = _measures(o["measures"])
    records = _load(o)
    s = metrics.score_all(records, _weights(o["weights"]))
    ok = metrics.correctness(records, s)
    grid = metrics.parse_grid(o["grid"])
    curves = {m: metrics.arc(records, s[m], grid, correct=ok) for m in measures}
    lines = ["rejection," + ",".join(measures)]
    for i, r in enumerate(grid):
        lines.append(",".join([_num(r)] + [_num(curves[m].accuracies[i]) for m in measures]))
    run.emit("arc.csv", "\n".join(lines) + "\n")
    if run.out:
        run.emit("arc.svg", line_plot({m: (c.fractions, c.accuracies) for m, c in curves.items()},
                                      title="Accuracy-rejection curve", xlabel="rejection rate", ylabel="accuracy"))
    return 0


def _split_records(o):
    meta = []
    if o["id"] and o["ood"]:
        return load_predictions(o["id"], o.get("format")), load_predictions(o["ood"], o.get("format")), meta
    if o["id"] or o["ood"]:
        raise UsageError("--id and --ood must be given together")
    # without files, read a split-tagged stream such as the output of `synth`
    records = load_predictions(o["input"] or "-", o.get("format"), meta=meta)
    ids = [r for r in records if r.split in ("test", "id")]
    oods = [r for r in records if r.split == "ood"]
    if not ids or not oods:
        raise SchemaError("stream needs records with split 'test' (or 'id') and 'ood'")
    return ids, oods, meta


def cmd_ood(run):
    o = run.options
    measures = _measures(o["measures"])
    ids, oods, meta = _split_records(o)
    w = _weights(o["weights"])
    s_id, s_ood = metrics.score_all(ids, w), metrics.score_all(oods, w)
    seed = meta[0].get("seed") if meta else o["seed"]
    lines = ["measure,auroc,id_min,id_median,id_max,ood_min,ood_median,ood_max"]
    for m in measures:
        rep = metrics.ood_report(s_id[m], s_ood[m])
        print(f"seed={seed} measure={m} auroc={rep.auroc:.6f} n_id={len(ids)} n_ood={len(oods)}")
        lines.append(",".join([m, _num(rep.auroc)] + [_num(x) for x in rep.id_summary + rep.ood_summary]))
    run.emit("ood.csv", "\n".join(lines) + "\n", stdout=False)
    return 0


def cmd_hist(run):
    o = run.options
    if not o["input"]:
        raise UsageError("hist needs --in")
    measures = _measures(o["measures"])
    records = _load(o)
    s = metrics.score_all(records, _weights(o["weights"]))
    ok = metrics.correctness(records, s)
    for m in measures:
        h = metrics.histogram_split(records, s[m], int(o["bins"]), correct=ok)
        lines = ["bin_lo,bin_hi,correct,incorrect"]
        for j in range(len(h.correct)):
            lines.append(f"{_num(h.edges[j])},{_num(h.edges[j + 1])},{h.correct[j]},{h.incorrect[j]}")
        run.emit(f"hist_{m}.csv", f"# measure={m}\n" + "\n".join(lines) + "\n")
        if run.out:
            centers = 0.5 * (h.edges[:-1] + h.edges[1:])
            run.emit(f"hist_{m}.svg", line_plot({"correct": (centers, h.correct), "incorrect": (centers, h.incorrect)},
                                                title=f"{m}: correct vs incorrect", xlabel=m, ylabel="count"))
    return 0


def cmd_synth(run):
    o = run.options
    cfg = SyntheticConfig(
        n_classes=int(o["classes"]), dim=int(o["dim"]), radius=float(o["radius"]), ood_radius=float(o["ood_radius"]),
        n_train=int(o["n_train"]), n_test=int(o["n_test"]), n_ood=int(o["n_ood"]), members=int(o["members"]),
        bootstrap_fraction=float(o["bootstrap_fraction"]), steps=int(o["steps"]), learning_rate=float(o["lr"]),
        l2=float(o["l2"]), seed=int(o["seed"]),
    )
    res = synth_run(cfg)
    meta = {"seed": cfg.seed, "config": cfg.to_dict()}
    if run.out:
        ext = "csv" if o["format"] == "csv" else "jsonl"
        for name, recs in (("train", res.train), ("test", res.test), ("ood", res.ood)):
            path = run.out / f"{name}.{ext}"
            write_predictions(recs, path, ext, meta=meta)
            run.files.append(path.name)
    else:
        sys.stdout.write(dumps_jsonl(res.test + res.ood, meta))
    return 0


COMMANDS = {"measure": cmd_measure, "figure1": cmd_figure1, "axioms": cmd_axioms, "arc": cmd_arc,
            "ood": cmd_ood, "hist": cmd_hist, "synth": cmd_synth}


def build_parser():
    p = argparse.ArgumentParser(prog="varuq", description="Variance- and entropy-based uncertainty measures.")
    p.add_argument("--version", action="version", version=f"varuq {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="output directory (default: stdout)")
        sp.add_argument("--config", default=None, help="JSON file of option values")
        return sp

    def inputs(sp):
        sp.add_argument("--in", dest="input", default=None, help="prediction file, '-' for stdin")
        sp.add_argument("--format", choices=("csv", "jsonl"), default=None)
        sp.add_argument("--weights", default=None, help="comma-separated label weights")

    sp = common(sub.add_parser("measure", help="score a prediction file"))
    inputs(sp)
    sp.add_argument("--measures", default=None)
    sp.add_argument("--labelwise", action="store_const", const=True, default=None)

    sp = common(sub.add_parser("figure1", help="Bernoulli second-order examples"))
    sp.add_argument("--n", type=int, default=None, help="samples per stream")
    sp.add_argument("--streams", type=int, default=None)

    sp = common(sub.add_parser("axioms", help="numerical axiom checks"))
    sp.add_argument("--family", choices=("variance", "entropy", "all"), default=None)
    sp.add_argument("--cases", type=int, default=None)
    sp.add_argument("--k-min", dest="k_min", type=int, default=None)
    sp.add_argument("--k-max", dest="k_max", type=int, default=None)
    sp.add_argument("--atoms-max", dest="atoms_max", type=int, default=None)

    sp = common(sub.add_parser("arc", help="accuracy-rejection curves"))
    inputs(sp)
    sp.add_argument("--measures", default=None)
    sp.add_argument("--grid", default=None, help="start:stop:step or comma list")

    sp = common(sub.add_parser("ood", help="OoD AUROC"))
    inputs(sp)
    sp.add_argument("--id", default=None, help="in-distribution prediction file")
    sp.add_argument("--ood", default=None, help="out-of-distribution prediction file")
    sp.add_argument("--measures", default=None)

    sp = common(sub.add_parser("hist", help="correct/incorrect histograms"))
    inputs(sp)
    sp.add_argument("--measures", "--measure", dest="measures", default=None)
    sp.add_argument("--bins", type=int, default=None)

    sp = common(sub.add_parser("synth", help="synthetic bagged-ensemble predictions"))
    for name, typ in (("classes", int), ("dim", int), ("radius", float), ("ood_radius", float), ("n_train", int),
                      ("n_test", int), ("n_ood", int), ("members", int), ("bootstrap_fraction", float),
                      ("steps", int), ("lr", float), ("l2", float)):
        sp.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None)
    sp.add_argument("--format", choices=("csv", "jsonl"), default=None)
    return p


def resolve(args) -> dict:
    """defaults < config file < explicit flags."""
    opts = dict(GLOBAL_DEFAULTS)
    opts.update(DEFAULTS[args.command])
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(cfg) - set(opts)
        if unknown:
            raise UsageError(f"unknown config keys for {args.command}: {sorted(unknown)}")
        opts.update(cfg)
    for k, v in vars(args).items():
        if k in opts and v is not None:
            opts[k] = v
    return opts


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = Run(args.command, resolve(args))
        code = COMMANDS[args.command](run)
        run.manifest()
        return code
    except (UsageError, SchemaError) as exc:
        print(f"varuq {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"varuq {args.command}: error: {exc}", file=sys.stderr)
        return 3
    except VarUQError as exc:
        print(f"varuq {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
