"""Command-line front end.

    vomm train data.bin --alg ppmc --params D=5 --out model.json
    vomm train data.bin --alg lzms --grid prediction --out model.json
    vomm eval corpus_dir --alg ppmc
    vomm eval test.bin --model model.json --history train.bin
    vomm tune data.bin --alg lzms --grid prediction --out model.json
    vomm prob --model model.json --context abraca --symbol d
    vomm parse data.bin --M 2 --S 0
    vomm ablate data.bin
    vomm classify-train class_a/ class_b/ --alg pststar --tune --out clf.json
    vomm classify melody.csv --model clf.json
    vomm classify class_a/ class_b/ --alg ppmc --grid classification
    vomm show model.json
    vomm synth corpus_dir --per-class 30 --length 200 --seed 7

Positional inputs are files, or directories meaning their files; classify
commands take one directory per class (or a single directory holding one
subdirectory per class).  Inputs are byte files by default; --mode tokens
reads whitespace-separated tokens (--alphabet lists them, one per line,
otherwise they are collected from the input), --mode midi-csv reads
pitch,volume,duration rows.  Losses and error rates print with 2 decimals;
--precision N widens that and --precision full prints shortest round-trip
floats.  Exit codes: 0 success, 1 usage error, 2 bad data, 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import statistics
import sys
from pathlib import Path

from . import classify as classify_mod
from . import core, evaluation, midi, registry, serialize, synth
from ._kernels import BACKEND_NAME
from .lz import LzMsParams, lzms_parse

MODES = ("bytes", "tokens", "midi-csv")


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


# ---------------------------------------------------------------------------
# input handling


def _read_file(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise core.DataError(f"cannot read {path}: {exc}") from exc


def _expand_inputs(paths) -> list[str]:
    """A directory input stands for its (sorted) files."""
    out: list[str] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            files = sorted(str(f) for f in path.iterdir() if f.is_file())
            if not files:
                raise core.DataError(f"directory {p} holds no files")
            out.extend(files)
        else:
            out.append(p)
    return out


def _alphabet_from_file(path: str) -> core.Alphabet:
    lines = [ln.strip() for ln in _read_file(path).decode("utf-8").splitlines()]
    return core.Alphabet([ln for ln in lines if ln])


def _load_sequences(paths, mode: str, alphabet: core.Alphabet | None = None, alphabet_file: str | None = None):
    """One sequence per file.  ``alphabet`` (e.g. from a saved model) wins
    over --alphabet, which wins over collecting tokens from the input."""
    if mode == "bytes":
        alph = alphabet or core.Alphabet.for_bytes()
        return [core.Sequence(alph, list(_read_file(p))) for p in paths]
    if mode == "midi-csv":
        alph = alphabet or midi.midi_alphabet()
        return [midi.midi_tokenize(_read_file(p).decode("utf-8"), alph) for p in paths]
    if mode == "tokens":
        token_lists = [_read_file(p).decode("utf-8").split() for p in paths]
        if alphabet is None:
            if alphabet_file:
                alphabet = _alphabet_from_file(alphabet_file)
            else:
                seen = sorted({t for toks in token_lists for t in toks})
                alphabet = core.Alphabet(seen)
        return [core.Sequence.of_tokens(alphabet, toks) for toks in token_lists]
    raise core.DataError(f"unknown mode {mode!r}")


def _context_sequence(text: str, mode: str, alphabet: core.Alphabet) -> core.Sequence:
    if mode == "tokens":
        return core.Sequence.of_tokens(alphabet, text.split())
    if mode == "bytes":
        return core.Sequence(alphabet, list(text.encode("latin-1")))
    return core.Sequence.of_text(alphabet, text)


def _symbol_index(text: str, mode: str, alphabet: core.Alphabet) -> int:
    if mode == "bytes":
        raw = text.encode("latin-1")
        if len(raw) != 1:
            raise core.DataError(f"--symbol must be one byte in bytes mode, got {text!r}")
        return alphabet.index(raw[0])
    if mode == "tokens":
        return alphabet.index(text.strip())
    if len(text) != 1:
        raise core.DataError(f"--symbol must be one character, got {text!r}")
    return alphabet.index(text)


def _class_dirs(inputs) -> list[Path]:
    """Positional classify inputs: one directory per class, or one root
    directory holding a subdirectory per class."""
    dirs = [Path(p) for p in inputs]
    for d in dirs:
        if not d.is_dir():
            raise core.DataError(f"{d} is not a class directory")
    if len(dirs) == 1:
        dirs = sorted(d for d in dirs[0].iterdir() if d.is_dir())
    if len(dirs) < 2:
        raise core.DataError("classification needs at least two class directories")
    return dirs


def _load_classes(dirs: list[Path], mode: str, alphabet: core.Alphabet | None = None, alphabet_file: str | None = None):
    """Per-class sequence lists over one shared alphabet, plus labels."""
    labels = [d.name for d in dirs]
    if len(set(labels)) != len(labels):
        labels = [str(d) for d in dirs]
        labels = [f"{p}#{i}" if labels.index(p) != i else p for i, p in enumerate(labels)]
    files_per_class = []
    for d in dirs:
        files = sorted(str(f) for f in d.iterdir() if f.is_file())
        if not files:
            raise core.DataError(f"class directory {d} has no sequence files")
        files_per_class.append(files)
    all_files = [f for files in files_per_class for f in files]
    seqs = _load_sequences(all_files, mode, alphabet=alphabet, alphabet_file=alphabet_file)
    out, pos = [], 0
    for files in files_per_class:
        out.append(seqs[pos : pos + len(files)])
        pos += len(files)
    return out, labels


def _parse_params(items) -> dict:
    """--params accepts repeated flags and comma-separated k=v pairs."""
    out = {}
    for item in items or ():
        for piece in item.split(","):
            piece = piece.strip()
            if not piece:
                continue
            if "=" not in piece:
                raise core.DataError(f"--params entries look like key=value, got {piece!r}")
            key, value = piece.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _load_grid(spec: str | None, algorithm: str, purpose: str) -> list[dict]:
    if spec is None:
        return evaluation.builtin_grid(purpose, algorithm)
    if spec in ("prediction", "classification"):
        return evaluation.builtin_grid(spec, algorithm)
    try:
        doc = json.loads(_read_file(spec).decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise core.DataError(f"grid file {spec} is not valid JSON: {exc}") from exc
    if not isinstance(doc, list) or not all(isinstance(g, dict) for g in doc):
        raise core.DataError(f"grid file {spec} must hold a JSON array of parameter objects")
    return doc


# ---------------------------------------------------------------------------
# output handling


def _fmt(x: float, args, default: int | None = 2) -> str:
    """Float formatting: N digits, or shortest round-trip with 'full'."""
    spec = getattr(args, "precision", None)
    if spec is None:
        digits = default
    elif spec == "full":
        digits = None
    else:
        try:
            digits = int(spec)
        except ValueError:
            raise core.DataError(f"--precision takes a digit count or 'full', got {spec!r}") from None
    if digits is None:
        return repr(float(x))
    return f"{x:.{digits}f}"


def _params_compact(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items()) if params else "(none)"


def _phrase_view(phrases, mode: str) -> list[str]:
    if mode == "tokens":
        return [" ".join(str(t) for t in p.tokens()) for p in phrases]
    if mode == "bytes":
        return [bytes(p.indices).decode("latin-1") for p in phrases]
    return [p.text() for p in phrases]


def _loss_table(rows: list[tuple[str, float, str]], args) -> None:
    """Rows of (name, loss, note); a summary row is added for 2+ rows."""
    for name, loss, note in rows:
        line = f"{name}\t{_fmt(loss, args)}"
        print(line + (f"\t{note}" if note else ""))
    if len(rows) > 1:
        losses = [r[1] for r in rows]
        avg = sum(losses) / len(losses)
        sem = statistics.stdev(losses) / math.sqrt(len(losses))
        print(f"Average±SEM\t{_fmt(avg, args)}±{_fmt(sem, args)}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_train(args) -> int:
    files = _expand_inputs(args.inputs)
    seqs = _load_sequences(files, args.mode, alphabet_file=args.alphabet)
    if sum(len(s) for s in seqs) == 0:
        raise core.DataError("training input is empty")
    tuning = None
    if args.grid:
        grid = _load_grid(args.grid, args.alg, "prediction")
        tuner = evaluation.cv_tune if len(seqs) == 1 else evaluation.cv_tune_sequences
        res = tuner(args.alg, seqs, grid, folds=args.folds)
        pred = res.predictor
        tuning = {"grid_points": len(res.table), "median_loss": res.best.median, "fold_losses": res.best.fold_losses}
        print(f"selected: {_params_compact(res.best.params)} (median loss {_fmt(res.best.median, args)})")
    else:
        pred = registry.train(args.alg, seqs, _parse_params(args.params))
    serialize.save_model(pred, args.out, input_digest=serialize.digest_sequences(seqs), tuning=tuning)
    print(f"trained {args.alg} on {len(seqs)} sequence(s), {sum(len(s) for s in seqs)} symbols [{BACKEND_NAME}]")
    print(f"model: {args.out}")
    return 0


def _cmd_eval(args) -> int:
    if bool(args.model) == bool(args.alg):
        raise core.DataError("eval needs exactly one of --model or --alg")
    files = _expand_inputs(args.inputs)
    rows = []
    if args.model:
        pred = serialize.load_model(args.model)
        seqs = _load_sequences(files, args.mode, alphabet=pred.alphabet)
        history = None
        if args.history:
            history = _load_sequences([args.history], args.mode, alphabet=pred.alphabet)[0]
        for path, seq in zip(files, seqs):
            rows.append((path, core.average_log_loss(pred, seq, history=history), ""))
    else:
        seqs = _load_sequences(files, args.mode, alphabet_file=args.alphabet)
        params = _parse_params(args.params)
        for path, seq in zip(files, seqs):
            if params:
                res = evaluation.half_split_eval(args.alg, [seq], params)
            else:
                grid = _load_grid(args.grid, args.alg, "prediction")
                res = evaluation.tuned_half_split_eval(args.alg, [seq], grid, folds=args.folds)
            rows.append((path, res.loss, _params_compact(res.params)))
    _loss_table(rows, args)
    return 0


def _cmd_tune(args) -> int:
    files = _expand_inputs(args.inputs)
    seqs = _load_sequences(files, args.mode, alphabet_file=args.alphabet)
    grid = _load_grid(args.grid, args.alg, "prediction")
    tuner = evaluation.cv_tune if len(seqs) == 1 else evaluation.cv_tune_sequences
    res = tuner(args.alg, seqs, grid, folds=args.folds)
    print(f"algorithm: {args.alg}")
    print(f"grid points: {len(res.table)}")
    print(f"selected: {_params_compact(res.best.params)}")
    print(f"median loss: {_fmt(res.best.median, args)}")
    print("fold losses: " + " ".join(_fmt(x, args) for x in res.best.fold_losses))
    if args.out:
        serialize.save_model(res.predictor, args.out, input_digest=serialize.digest_sequences(seqs))
        print(f"model: {args.out}")
    return 0


def _cmd_prob(args) -> int:
    pred = serialize.load_model(args.model)
    ctx = _context_sequence(args.context or "", args.mode, pred.alphabet)
    if args.symbol is not None:
        sym = _symbol_index(args.symbol, args.mode, pred.alphabet)
        print(_fmt(pred.prob(sym, ctx), args, default=None))
        return 0
    dist = pred.distribution(ctx)
    for i, p in enumerate(dist):
        print(f"{pred.alphabet.symbol(i)}\t{_fmt(p, args, default=None)}")
    return 0


def _cmd_parse(args) -> int:
    files = _expand_inputs(args.inputs)
    seqs = _load_sequences(files, args.mode, alphabet_file=args.alphabet)
    phrases, _ = lzms_parse(seqs, LzMsParams(M=args.M, S=args.S))
    print("|".join(_phrase_view(phrases, args.mode)))
    return 0


def _cmd_ablate(args) -> int:
    files = _expand_inputs(args.inputs)
    seqs = _load_sequences(files, args.mode, alphabet_file=args.alphabet)
    ms = tuple(int(x) for x in args.Ms.split(","))
    ss = tuple(int(x) for x in args.Ss.split(","))
    res = evaluation.lzms_ablation(seqs, ms, ss, folds=args.folds)
    for name, ev in (("M only", res.m_only), ("S only", res.s_only), ("joint", res.joint)):
        print(f"{name}\t{_fmt(ev.loss, args)}\t({_params_compact(ev.params)})")
    return 0


def _cmd_classify_train(args) -> int:
    dirs = _class_dirs(args.inputs)
    class_seqs, labels = _load_classes(dirs, args.mode, alphabet_file=args.alphabet)
    grid = _load_grid(args.grid, args.alg, "classification") if (args.tune or args.grid) else None
    clf = classify_mod.fit_classifier(
        args.alg, class_seqs, labels, params=_parse_params(args.params), grid=grid, tune=args.tune
    )
    print(f"algorithm: {args.alg}")
    for label, seqs, p in zip(labels, class_seqs, clf.params_per_class):
        print(f"class {label}: {len(seqs)} sequence(s), params {_params_compact(p)}")
    if args.out:
        all_seqs = [s for seqs in class_seqs for s in seqs]
        serialize.save_classifier(clf, args.out, input_digest=serialize.digest_sequences(all_seqs))
        print(f"model: {args.out}")
    return 0


def _cmd_classify(args) -> int:
    if bool(args.model) == bool(args.alg):
        raise core.DataError("classify needs exactly one of --model or --alg")
    if args.alg:
        dirs = _class_dirs(args.inputs)
        class_seqs, labels = _load_classes(dirs, args.mode, alphabet_file=args.alphabet)
        grid = _load_grid(args.grid, args.alg, "classification") if (args.tune or args.grid) else None
        report = classify_mod.cross_validated_classification(
            args.alg, class_seqs, labels, params=_parse_params(args.params), grid=grid, folds=args.folds, tune=args.tune
        )
        print(f"algorithm: {args.alg}")
        print(f"sequences: {report.total}")
        for label in labels:
            print(f"class {label}: error {_fmt(report.per_class_error[label], args)}")
        print(f"macro error: {_fmt(report.macro_error, args)}")
        print(f"weighted error: {_fmt(report.weighted_error, args)}")
        print(f"sem over folds: {_fmt(report.sem, args)}")
        return 0
    clf = serialize.load_classifier(args.model)
    alphabet = clf.models[0].alphabet
    if all(Path(p).is_dir() for p in args.inputs):
        dirs = _class_dirs(args.inputs)
        class_seqs, labels = _load_classes(dirs, args.mode, alphabet=alphabet)
        if labels != clf.label_names:
            raise core.DataError(f"directory classes {labels} do not match model classes {clf.label_names}")
        trials = mistakes = 0
        for c, seqs in enumerate(class_seqs):
            wrong = sum(1 for s in seqs if clf.classify_index(s) != c)
            print(f"class {labels[c]}: error {_fmt(wrong / len(seqs), args)} ({len(seqs)} sequence(s))")
            trials += len(seqs)
            mistakes += wrong
        print(f"overall error: {_fmt(mistakes / trials, args)}")
        return 0
    files = _expand_inputs(args.inputs)
    seqs = _load_sequences(files, args.mode, alphabet=alphabet)
    for path, seq in zip(files, seqs):
        label, _ = clf.classify(seq)
        print(f"{path}\t{label}")
    return 0


def _render_path(alphabet: core.Alphabet, path: list[int]) -> str:
    tokens = [alphabet.symbol(i) for i in path]
    if all(isinstance(t, int) and 0 <= t <= 255 for t in tokens):
        return bytes(tokens).decode("latin-1")
    return "".join(str(t) for t in tokens)


def _cmd_show(args) -> int:
    raw = json.loads(_read_file(args.model).decode("utf-8"))
    pred = serialize.load_model(args.model)
    doc = {
        "algorithm": pred.algorithm,
        "alphabet_size": pred.alphabet.size,
        "params": dataclasses.asdict(pred.params),
        "created": raw.get("created"),
        "input_digest": raw.get("input_digest"),
        "backend": BACKEND_NAME,
    }
    if raw.get("tuning"):
        doc["tuning"] = raw["tuning"]
    if hasattr(pred, "trie") and hasattr(pred.trie, "expanded_paths"):
        doc["nodes"] = pred.trie.node_count()
        doc["phrases"] = [_render_path(pred.alphabet, p) for p in pred.trie.expanded_paths()]
    elif hasattr(pred, "trie"):
        doc["nodes"] = pred.trie.node_count()
    elif hasattr(pred, "model"):
        doc["nodes"] = pred.model.node_count()
    elif hasattr(pred, "nodes"):
        doc["decomposition_nodes"] = len(pred.nodes)
        doc["nodes"] = sum(np_.model.node_count() for np_ in pred.nodes)
    elif hasattr(pred, "tree"):
        doc["nodes"] = len(pred.tree)
        doc["max_context"] = max((len(t) for t in pred.tree), default=0)
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_synth(args) -> int:
    class_seqs, labels, _ = synth.synthetic_markov_corpus(
        per_class=args.per_class, length=args.length, n_classes=args.classes, seed=args.seed
    )
    base = Path(args.out)
    base.mkdir(parents=True, exist_ok=True)
    written = 0
    for label, seqs in zip(labels, class_seqs):
        d = base / label
        d.mkdir(exist_ok=True)
        for i, seq in enumerate(seqs):
            (d / f"seq{i:03d}.txt").write_bytes(seq.text().encode("ascii"))
            written += 1
    print(f"wrote {written} files to {base} ({len(labels)} classes, length {args.length}, seed {args.seed})")
    return 0


# ---------------------------------------------------------------------------
# wiring


def _add_common(p, inputs=True):
    if inputs:
        p.add_argument("inputs", nargs="+", metavar="input", help="input file or directory of files")
    p.add_argument("--mode", choices=MODES, default="bytes")
    p.add_argument("--alphabet", help="token alphabet file, one token per line (tokens mode)")
    p.add_argument("--precision", help="float digits, or 'full'")


def build_parser() -> _ArgParser:
    algs = sorted(registry.ALGORITHMS)
    parser = _ArgParser(prog="vomm", description="variable-order sequence predictors")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("train", help="train a model and save it")
    p.add_argument("--alg", required=True, choices=algs)
    p.add_argument("--params", action="append", help="key=value, repeatable or comma separated")
    p.add_argument("--grid", help="tune first: builtin grid name (prediction, classification) or JSON file")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="half-split log-loss per input, or score a saved model")
    p.add_argument("--alg", choices=algs)
    p.add_argument("--model", help="saved model to score instead of training")
    p.add_argument("--history", help="context file scored before each input (with --model)")
    p.add_argument("--params", action="append", help="fixed parameters (skips tuning)")
    p.add_argument("--grid", help="builtin grid name or JSON file (default: prediction)")
    p.add_argument("--folds", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("tune", help="pick hyper-parameters by cross-validation")
    p.add_argument("--alg", required=True, choices=algs)
    p.add_argument("--grid", help="builtin grid name or JSON file (default: prediction)")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--out", help="save the retrained winner here")
    _add_common(p)
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("prob", help="next-symbol probability from a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--context", default="", help="conditioning text (empty for no context)")
    p.add_argument("--symbol", help="symbol to score; omit for the full distribution")
    _add_common(p, inputs=False)
    p.set_defaults(func=_cmd_prob)

    p = sub.add_parser("parse", help="show the incremental phrase parse")
    p.add_argument("--M", type=int, default=0, help="input shift parameter")
    p.add_argument("--S", type=int, default=0, help="back-shift parse parameter")
    _add_common(p)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("ablate", help="tune parsing tweaks separately and jointly")
    p.add_argument("--Ms", default="0,2,4,6,8")
    p.add_argument("--Ss", default="0,2,4,6,8,10,12,14,16,18")
    p.add_argument("--folds", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("classify-train", help="train one model per class directory")
    p.add_argument("--alg", required=True, choices=algs)
    p.add_argument("--params", action="append")
    p.add_argument("--grid", help="grid for per-class tuning")
    p.add_argument("--tune", action="store_true", help="tune each class by inner cross-validation")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_classify_train)

    p = sub.add_parser("classify", help="label inputs, or cross-validate class directories")
    p.add_argument("--model", help="saved classifier (labels the inputs)")
    p.add_argument("--alg", choices=algs, help="cross-validate class directories instead")
    p.add_argument("--params", action="append")
    p.add_argument("--grid")
    p.add_argument("--tune", action="store_true")
    p.add_argument("--folds", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("show", help="summarize a saved model")
    p.add_argument("model")
    p.add_argument("--precision", help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_show)

    p = sub.add_parser("synth", help="write a synthetic labeled corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--per-class", type=int, default=30, dest="per_class")
    p.add_argument("--length", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args) or 0
    except core.NumericError as exc:
        print(f"vomm: numeric error: {exc}", file=sys.stderr)
        return 3
    except core.DataError as exc:
        print(f"vomm: data error: {exc}", file=sys.stderr)
        return 2
    except core.VommError as exc:
        print(f"vomm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
