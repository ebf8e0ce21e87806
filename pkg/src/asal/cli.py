"""Command-line interface: ``asal <subcommand> ...``.

Exit codes: 0 success, 1 invalid input data or model, 2 invalid configuration.
Settings may come from ``--config FILE.json`` (flat keys); explicit flags win.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import platform
import sys
import time
from pathlib import Path

from . import __version__
from .asp import export_asp
from .automaton import AsaSyntaxError, Semantics, parse_asa, render_asa, run
from .config import INCR_KEYS, batch_config, learner_config, load_config_file, sax_config
from .core import AlphabetSpec, AttributeSet, Dataset, DatasetError, Label, LabeledExample, validate_dataset
from .evaluation import WORKERS_ENV, cross_validate, fingerprint, learn, model_size, scores
from .guards import GuardError
from .io import (DataError, attach_labels, load_dataset, load_series, read_labels, read_text, save_dataset,
                 write_long_csv, write_wide_csv)
from .objective import ConfigError
from .planted import PlantedGenerationError, PlantedModelSpec, generate_planted
from .sax import discretize

log = logging.getLogger("asal")

VALIDATION_ERRORS = (DataError, DatasetError, AsaSyntaxError, GuardError, PlantedGenerationError)


def _versions() -> dict:
    import numpy
    import scipy
    import sklearn

    return {"asal": __version__, "python": platform.python_version(), "numpy": numpy.__version__,
            "scipy": scipy.__version__, "scikit-learn": sklearn.__version__}


def write_manifest(out: Path, command: str, settings: dict, seeds: dict, outputs: list, extra=None) -> Path:
    path = out.with_name(out.name + ".manifest.json")
    manifest = {"command": command, "argv": sys.argv[1:], "settings": settings,
                "fingerprint": fingerprint(command, settings, seeds), "seeds": seeds,
                "versions": _versions(), "outputs": [str(p) for p in outputs],
                "created": time.strftime("%Y-%m-%dT%H:%M:%S")}
    if extra:
        manifest.update(extra)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return path


def _settings(args, keys) -> dict:
    """Config-file values overlaid with every flag given on the command line."""
    merged = dict(load_config_file(args.config)) if getattr(args, "config", None) else {}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _alphabet(text: str | None) -> AlphabetSpec | None:
    if not text:
        return None
    if text.startswith("letters:"):
        try:
            return AlphabetSpec.letters(int(text.split(":", 1)[1]))
        except ValueError as exc:
            raise ConfigError(f"bad alphabet {text!r}: {exc}") from exc
    return AlphabetSpec(tuple(s.strip() for s in text.split(",") if s.strip()))


def _write_predictions(path: Path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seq_id", "label", "predicted", "first_accept_time"])
        for sid, label, predicted, when in rows:
            w.writerow([sid, label, "pos" if predicted else "neg", "" if when is None else when])


def _predict_rows(asa, ds: Dataset, sem: Semantics, labeled=True):
    rows = []
    for ex in ds:
        res = run(asa, ex.mvs, sem, ds.alphabet)
        rows.append((ex.id, ex.label.value if labeled else "", res.accepted, res.first_accept_time))
    return rows


# argument groups -----------------------------------------------------------------------------------

def _bool(parser, name, help):
    parser.add_argument(f"--{name.replace('_', '-')}", dest=name, action=argparse.BooleanOptionalAction,
                        default=None, help=help)


def _add_data(p, labels=True):
    p.add_argument("--data", required=True, help="symbolic sequences (CSV)")
    if labels:
        p.add_argument("--labels", required=True, help="seq_id,label CSV")
    p.add_argument("--format", default="long_csv", choices=["long_csv", "wide_csv"])
    p.add_argument("--alphabet", help="ordered symbols, comma separated, or letters:N (default: sorted observed)")


def _add_semantics(p):
    p.add_argument("--policy", choices=["strict_contiguity", "skip_till_any_match"])
    p.add_argument("--acceptance", choices=["end_of_sequence", "earliest_absorbing", "earliest"])


def _add_learning(p, incremental=False):
    p.add_argument("--config", help="JSON file of flat settings; flags override it")
    p.add_argument("--seed", type=int, required=True, help="random seed (mandatory)")
    _add_semantics(p)
    p.add_argument("--max-states", dest="max_states", type=int)
    p.add_argument("--max-transitions", dest="max_transitions", type=int)
    _bool(p, "accepting_absorbing", "accepting states have no outgoing non-self-loop transitions")
    _bool(p, "start_not_accepting", "forbid an accepting start state")
    p.add_argument("--kinds", help="symbolic, classic, or comma list of eq,neg,lt,at_least,at_most")
    _bool(p, "full_alphabet", "ground guards over the whole alphabet instead of observed symbols")
    p.add_argument("--w-fp", dest="w_fp", type=int)
    p.add_argument("--w-fn", dest="w_fn", type=int)
    _bool(p, "balance", "weight errors by the class ratio")
    p.add_argument("--transition-penalty", dest="transition_penalty", type=int)
    _bool(p, "earliness", "add the earliness term to the regularization level")
    p.add_argument("--earliness-mode", dest="earliness_mode", choices=["sum_all_accept_steps", "first_accept_step"])
    p.add_argument("--timeout", type=float, help="seconds for the batch search")
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-sideways", dest="max_sideways", type=int)
    if incremental:
        p.add_argument("--batch-size", dest="batch_size", type=int)
        p.add_argument("--error-threshold", dest="error_threshold", type=float)
        p.add_argument("--per-batch-timeout", dest="per_batch_timeout", type=float)
        p.add_argument("--k-best", dest="k_best", type=int)
        p.add_argument("--iterations", type=int)
        p.add_argument("--shuffle-seed", dest="shuffle_seed", type=int,
                       help="defaults to --seed")


LEARN_KEYS = ("policy", "acceptance", "max_states", "max_transitions", "accepting_absorbing",
              "start_not_accepting", "kinds", "full_alphabet", "w_fp", "w_fn", "balance", "transition_penalty",
              "earliness", "earliness_mode", "timeout", "restarts", "max_sideways", "seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asal", description="Learn answer set automata from labeled "
                                     "multivariate symbolic sequences.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discretize", help="SAX-encode real-valued sequences")
    p.add_argument("--data", required=True)
    p.add_argument("--format", default="long_csv", choices=["long_csv", "wide_csv"])
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--alphabet-size", dest="alphabet_size", type=int)
    p.add_argument("--breakpoint-mode", dest="breakpoint_mode", choices=["gaussian_equiprobable", "uniform_range"])
    p.add_argument("--paa-window", dest="paa_window", type=int)
    p.add_argument("--normalize", choices=["per_sequence_per_attribute_zscore", "none"])

    p = sub.add_parser("learn-batch", help="learn an automaton with anytime local search")
    _add_data(p)
    _add_learning(p)
    p.add_argument("--out", required=True, help="model file (ASA facts)")

    p = sub.add_parser("learn-incr", help="learn an automaton by mini-batch revision")
    _add_data(p)
    _add_learning(p, incremental=True)
    p.add_argument("--out", required=True, help="model file (ASA facts)")

    p = sub.add_parser("run", help="classify sequences with a model")
    _add_data(p, labels=False)
    p.add_argument("--labels", help="optional labels; enables metrics")
    p.add_argument("--model", required=True)
    p.add_argument("--config")
    _add_semantics(p)
    p.add_argument("--out", required=True, help="predictions CSV")

    p = sub.add_parser("eval", help="stratified k-fold cross-validation")
    _add_data(p)
    p.add_argument("--learner", choices=["batch", "incremental"], default="batch")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--workers", type=int, help=f"parallel folds (default: ${WORKERS_ENV} or 1)")
    _add_learning(p, incremental=True)
    p.add_argument("--out", required=True, help="report JSON; predictions go next to it")

    p = sub.add_parser("export-asp", help="write the learning task as a clingo program")
    _add_data(p)
    p.add_argument("--config")
    _add_semantics(p)
    p.add_argument("--max-states", dest="max_states", type=int)
    p.add_argument("--max-transitions", dest="max_transitions", type=int)
    _bool(p, "accepting_absorbing", "absorbing-accepting hard constraint")
    _bool(p, "start_not_accepting", "forbid an accepting start state")
    p.add_argument("--kinds")
    _bool(p, "full_alphabet", "ground over the whole alphabet")
    p.add_argument("--w-fp", dest="w_fp", type=int)
    p.add_argument("--w-fn", dest="w_fn", type=int)
    p.add_argument("--transition-penalty", dest="transition_penalty", type=int)
    _bool(p, "earliness", "earliness weak constraint")
    p.add_argument("--earliness-mode", dest="earliness_mode", choices=["sum_all_accept_steps", "first_accept_step"])
    p.add_argument("--incumbent", help="existing model to revise")
    p.add_argument("--out", required=True)

    p = sub.add_parser("generate", help="synthetic data labeled by a planted automaton")
    p.add_argument("--model", help="planted ASA file (default: built-in two-state automaton)")
    p.add_argument("--attributes", default="x1,x2,x3")
    p.add_argument("--alphabet", default="letters:4")
    _add_semantics(p)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--n-pos", dest="n_pos", type=int, default=100)
    p.add_argument("--n-neg", dest="n_neg", type=int, default=100)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--format", default="long_csv", choices=["long_csv", "wide_csv"])
    p.add_argument("--out", required=True, help="sequences CSV; labels and the planted model go next to it")
    return parser


# subcommands -----------------------------------------------------------------------------------------

def _load(args) -> Dataset:
    return load_dataset(args.data, args.labels, args.format, _alphabet(args.alphabet))


def cmd_discretize(args) -> int:
    settings = _settings(args, ("alphabet_size", "breakpoint_mode", "paa_window", "normalize"))
    cfg = sax_config(settings)
    kind, series, attrs = load_series(args.data, args.format, kind="numeric")
    mvs = [discretize(s, cfg) for s in series]
    out = Path(args.out)
    if args.format == "wide_csv":
        write_wide_csv(mvs, out, attrs)
    else:
        write_long_csv(mvs, out, attrs)
    write_manifest(out, "discretize", cfg.as_dict(), {}, [out])
    return 0


def _learn(args, learner: str) -> int:
    keys = LEARN_KEYS + (INCR_KEYS if learner == "incremental" else ())
    settings = _settings(args, keys)
    if learner == "incremental":
        settings.setdefault("shuffle_seed", args.seed)
    cfg = learner_config(learner, settings)
    ds = _load(args)
    out = Path(args.out)
    report = learn(ds, learner, cfg)
    sem = cfg.semantics if learner == "batch" else cfg.batch.semantics
    out.write_text(render_asa(report.asa), encoding="utf-8")
    pred_path = out.with_name(out.name + ".predictions.csv")
    rows = _predict_rows(report.asa, ds, sem)
    _write_predictions(pred_path, rows)
    outputs = [out, pred_path]
    if report.log:
        log_path = out.with_name(out.name + ".log.tsv")
        log_path.write_text("iteration\tbatch\tlocal_error\trevised\tadopted\tglobal_cost\n"
                            + "\n".join(report.log) + "\n", encoding="utf-8")
        outputs.append(log_path)
    states, transitions = model_size(report.asa)
    train = scores([ex.positive for ex in ds], [r[2] for r in rows])
    summary = {"cost": list(report.cost), "states": states, "transitions": transitions,
               "wall_time_s": report.wall_time, "timed_out": report.timed_out, "training": train,
               "max_states": report.asa.num_states}
    seeds = {"seed": args.seed}
    if learner == "incremental":
        seeds["shuffle_seed"] = settings["shuffle_seed"]
    write_manifest(out, f"learn-{'batch' if learner == 'batch' else 'incr'}", settings, seeds, outputs,
                   {"result": summary})
    print(render_asa(report.asa), end="")
    print(f"% cost (error, reg) = ({report.cost.error}, {report.cost.reg}); training F1 = {train['f1']:.4f}")
    return 0


def cmd_learn_batch(args) -> int:
    return _learn(args, "batch")


def cmd_learn_incr(args) -> int:
    return _learn(args, "incremental")


def _semantics(settings: dict) -> Semantics:
    try:
        return Semantics(settings.get("policy", "strict_contiguity"), settings.get("acceptance", "end_of_sequence"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_run(args) -> int:
    settings = _settings(args, ("policy", "acceptance"))
    sem = _semantics(settings)
    _, seqs, attrs = load_series(args.data, args.format, kind="symbolic")
    if args.labels:
        pairs = attach_labels(seqs, read_labels(args.labels), args.labels)
    else:
        pairs = [(s, Label.NEGATIVE) for s in seqs]
    alphabet = _alphabet(args.alphabet)
    if alphabet is None:
        alphabet = AlphabetSpec(tuple(sorted({x for m in seqs for v in m.values.values() for x in v})))
    ds = Dataset(tuple(LabeledExample(m, lab) for m, lab in pairs), alphabet, attrs)
    problems = validate_dataset(ds)
    if problems:
        raise DatasetError(problems)
    asa = parse_asa(read_text(args.model), attributes=attrs, alphabet=alphabet)
    rows = _predict_rows(asa, ds, sem, labeled=bool(args.labels))
    out = Path(args.out)
    _write_predictions(out, rows)
    extra = {}
    if args.labels:
        extra["metrics"] = scores([ex.positive for ex in ds], [r[2] for r in rows])
        print(json.dumps(extra["metrics"]))
    write_manifest(out, "run", settings, {}, [out], extra)
    return 0


def cmd_eval(args) -> int:
    settings = _settings(args, LEARN_KEYS + INCR_KEYS)
    if args.learner == "incremental":
        settings.setdefault("shuffle_seed", args.seed)
    else:
        for key in INCR_KEYS:
            settings.pop(key, None)
    cfg = learner_config(args.learner, settings)
    ds = _load(args)
    report = cross_validate(ds, args.learner, cfg, folds=args.folds, seed=args.seed, workers=args.workers)
    out = Path(args.out)
    summary = report.summary()
    out.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    pred_path = out.with_name(out.name + ".predictions.csv")
    with open(pred_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["fold", "seq_id", "label", "predicted"])
        for fold, sid, y, p in report.predictions():
            w.writerow([fold, sid, "pos" if y else "neg", "pos" if p else "neg"])
    write_manifest(out, "eval", settings, {"seed": args.seed}, [out, pred_path],
                   {"learner": args.learner, "folds": args.folds})
    print(f"F1 {report.f1:.4f}  precision {report.precision:.4f}  recall {report.recall:.4f}  "
          f"states {report.states:.1f}  transitions {report.transitions:.1f}  minutes {report.minutes:.3f}")
    return 0


def cmd_export_asp(args) -> int:
    keys = ("policy", "acceptance", "max_states", "max_transitions", "accepting_absorbing", "start_not_accepting",
            "kinds", "full_alphabet", "w_fp", "w_fn", "transition_penalty", "earliness", "earliness_mode")
    settings = _settings(args, keys)
    cfg = batch_config(settings)
    ds = _load(args)
    incumbent = None
    if args.incumbent:
        incumbent = parse_asa(read_text(args.incumbent), num_states=cfg.structural.max_states,
                              attributes=ds.attributes, alphabet=ds.alphabet)
    text = export_asp(ds, cfg.structural, cfg.objective, cfg.semantics, cfg.kinds, cfg.full_alphabet, incumbent)
    out = Path(args.out)
    out.write_text(text, encoding="utf-8")
    write_manifest(out, "export-asp", settings, {}, [out])
    return 0


def cmd_generate(args) -> int:
    attrs = AttributeSet(tuple(a.strip() for a in args.attributes.split(",") if a.strip()))
    alphabet = _alphabet(args.alphabet)
    sem = _semantics({"policy": args.policy or "strict_contiguity", "acceptance": args.acceptance or "earliest"})
    kwargs = dict(attributes=attrs, alphabet=alphabet, semantics=sem, length=args.length, n_pos=args.n_pos,
                  n_neg=args.n_neg, noise=args.noise, seed=args.seed)
    if args.model:
        kwargs["asa"] = parse_asa(read_text(args.model), attributes=attrs, alphabet=alphabet)
    try:
        spec = PlantedModelSpec(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    ds, asa = generate_planted(spec)
    out = Path(args.out)
    labels = out.with_name(out.stem + ".labels.csv")
    model = out.with_name(out.stem + ".planted.asa")
    save_dataset(ds, out, labels, args.format)
    model.write_text(render_asa(asa), encoding="utf-8")
    settings = {k: v for k, v in vars(args).items() if k not in ("func", "command", "verbose")}
    write_manifest(out, "generate", settings, {"seed": args.seed}, [out, labels, model])
    return 0


COMMANDS = {"discretize": cmd_discretize, "learn-batch": cmd_learn_batch, "learn-incr": cmd_learn_incr,
            "run": cmd_run, "eval": cmd_eval, "export-asp": cmd_export_asp, "generate": cmd_generate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except VALIDATION_ERRORS as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
