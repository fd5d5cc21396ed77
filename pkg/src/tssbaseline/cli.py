"""Command-line pipeline: score tweets, analyze lags, classify, CEFD, synthesize.

Exit codes: 0 success, 1 bad input, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import traceback
from pathlib import Path
from typing import List, Optional

from . import align, baseline, cefd, classifiers, corpus, ingest, lexicon, regression
from .series import InputError, Series
from .svg import Line, bar_chart, line_chart

TOP_WORDS = 30


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def series_csv(series: Series, column: str) -> str:
    lines = [f"sample_index,{column}"] + [f"{t},{v!r}" for t, v in series]
    return "\n".join(lines) + "\n"


def read_series_csv(path, column: str) -> Series:
    """Read a ``sample_index,<column>`` file written by :func:`series_csv`."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        return Series()
    if lines[0].strip() != f"sample_index,{column}":
        raise InputError(f"{path}:1: expected header sample_index,{column}")
    pairs = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            if len(parts) != 2:
                raise ValueError
            pairs.append((int(parts[0]), float(parts[1])))
        except ValueError:
            raise InputError(f"{path}:{lineno}: malformed row {line!r}") from None
    pairs.sort()
    for (a, _), (b, _) in zip(pairs, pairs[1:]):
        if a == b:
            raise InputError(f"{path}: duplicate sample_index {a}")
    return Series.from_pairs(pairs)


def _lexicon(args) -> lexicon.Lexicon:
    if args.lexicon_pos is None and args.lexicon_neg is None:
        return lexicon.default_lexicon()
    if args.lexicon_pos is None or args.lexicon_neg is None:
        raise InputError("give both --lexicon-pos and --lexicon-neg, or neither")
    return lexicon.load_lexicon(args.lexicon_pos, args.lexicon_neg)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"--{name.replace('_', '-')} is required")


def _split_index(series: Series, fraction: Optional[float]) -> Optional[int]:
    """Last sample index of the training prefix, or None without a split."""
    if fraction is None:
        return None
    if not 0 < fraction < 1:
        raise InputError("--split must lie strictly between 0 and 1")
    cut = int(round(fraction * len(series)))
    if cut < 1 or cut >= len(series):
        raise InputError("--split leaves an empty train or test part")
    return series.index[cut - 1]


def cmd_score(args) -> None:
    _require(args, "tweets")
    lex = _lexicon(args)
    batches = ingest.read_tweets(args.tweets)
    out = Path(args.out_dir)
    tss = lexicon.score_series(batches, lex)
    table = corpus.word_frequencies(batches)
    top = corpus.top_k(table, TOP_WORDS)
    write_atomic(out / "tss.csv", series_csv(tss, "tss"))
    write_atomic(out / "corpus.csv", table.to_csv())
    write_atomic(out / "corpus.svg", bar_chart([e.token for e in top],
                                               [e.total_count for e in top], "Most frequent words"))


def _fit_or_error(series: Series, degree: int) -> dict:
    try:
        return regression.fit_series(series, degree).to_dict()
    except InputError as exc:
        return {"error": str(exc)}


def analyze(indicator: Series, price: Series, out: Path, *, lag_min: int, lag_max: int,
            degree: int, tss_b: Optional[float], split: Optional[float], name: str = "tss") -> int:
    """Lag scan, polynomial fits, baseline and regions; returns the best lag."""
    train_end = _split_index(indicator, split)
    train = indicator.between(hi=train_end) if train_end is not None else indicator
    scan = align.scan_lags(train, price, lag_min, lag_max, tss_b)
    lag = scan.best_lag
    write_atomic(out / "lag_scan.csv", scan.to_csv())
    write_atomic(out / "lag_scan.json", dump_json(scan.to_dict()))

    shifted = align.lag_shift(price, lag)
    common = sorted(set(indicator.index) & set(shifted.index))
    ind_common = Series.from_pairs((t, indicator.get(t)) for t in common)
    px_common = Series.from_pairs((t, shifted.get(t)) for t in common)
    fits = {name: _fit_or_error(ind_common, degree), "price": _fit_or_error(px_common, degree),
            "lag": lag}
    write_atomic(out / "fit.json", dump_json(fits))

    if tss_b is None:
        b, report = baseline.select_baseline(train, price, lag)
    else:
        b, report = tss_b, baseline.evaluate_baseline(train, price, lag, tss_b)
    summary = report.to_dict()
    if train_end is not None:
        summary["split_after_sample"] = train_end
        try:
            held = baseline.evaluate_baseline(indicator.between(lo=train_end + 1), price, lag, b)
            summary["holdout"] = held.to_dict()
        except InputError as exc:
            summary["holdout"] = {"error": str(exc)}
    write_atomic(out / "baseline.json", dump_json(summary))
    write_atomic(out / "baseline.csv", report.to_csv())
    regions = baseline.segment_regions(report)
    write_atomic(out / "regions.csv", regions.to_csv())

    fitted = {key: regression.FitReport.from_dict(fits[key])
              for key in (name, "price") if "error" not in fits[key]}
    lagged = shifted.to_dict()
    on_fit = set(common)

    def cell(v):
        return "" if v is None else repr(float(v))

    fig_rows = ["t,indicator,price,price_lagged,indicator_fit,price_fit"]
    for t in sorted(set(indicator.index) | set(price.index)):
        fit_cells = [cell(regression.evaluate(fitted[k], t)) if k in fitted and t in on_fit else ""
                     for k in (name, "price")]
        fig_rows.append(",".join([str(t), cell(indicator.get(t)), cell(price.get(t)),
                                  cell(lagged.get(t)), *fit_cells]))
    write_atomic(out / "figure_data.csv", "\n".join(fig_rows) + "\n")

    write_atomic(out / "fig_series.svg", line_chart(
        [Line(name.upper(), indicator.index, indicator.values), Line("price", price.index, price.values)],
        f"{name.upper()} and price"))
    write_atomic(out / "fig_lagged.svg", line_chart(
        [Line(name.upper(), indicator.index, indicator.values),
         Line(f"price lagged {lag}", shifted.index, shifted.values)],
        f"{name.upper()} and {lag}-sample lagged price"))
    fit_lines = [Line(name.upper(), ind_common.index, ind_common.values, axis=name),
                 Line(f"price lagged {lag}", px_common.index, px_common.values, axis="price")]
    for key, label in ((name, f"{name.upper()} fit"), ("price", "price fit")):
        if key in fitted:
            xs = ind_common.index
            fit_lines.append(Line(label, xs, [regression.evaluate(fitted[key], x) for x in xs],
                                  dashed=True, axis=key))
    write_atomic(out / "fig_fit.svg", line_chart(
        fit_lines, f"Degree-{degree} fits with baseline", hline=("baseline", b),
        bands=[(r.start_t, r.end_t, r.capable) for r in regions.regions]))
    return lag


def cmd_analyze(args) -> None:
    _require(args, "tss", "prices")
    indicator = read_series_csv(args.tss, "tss")
    price = ingest.read_prices(args.prices)
    analyze(indicator, price, Path(args.out_dir), lag_min=args.lag_min, lag_max=args.lag_max,
            degree=args.degree, tss_b=args.tss_b, split=args.split)


def cmd_classify(args) -> None:
    _require(args, "tss", "prices")
    indicator = read_series_csv(args.tss, "tss")
    price = ingest.read_prices(args.prices)
    lag = args.lag
    if lag is None:
        lag = align.scan_lags(indicator, price, args.lag_min, args.lag_max, args.tss_b).best_lag
    data = classifiers.build_dataset(indicator, price, lag, window=args.window)
    train, test = data, data
    if args.split is not None:
        if not 0 < args.split < 1:
            raise InputError("--split must lie strictly between 0 and 1")
        train, test = data.split(args.split)
        if not len(train) or not len(test):
            raise InputError("--split leaves an empty train or test part")
    models, reports = {"lag": lag, "window": args.window}, {"lag": lag, "evaluated_on": "test" if args.split else "train"}
    fitters = (("logistic", classifiers.fit_logistic), ("lda", classifiers.fit_lda), ("qda", classifiers.fit_qda))
    for key, fit in fitters:
        try:
            model = fit(train)
        except InputError as exc:
            if key == "logistic":
                raise
            models[key] = reports[key] = {"error": str(exc)}
            continue
        models[key] = model.to_dict()
        predicted = classifiers.predict(model, test.features)
        reports[key] = classifiers.confusion(predicted, test.labels).to_dict()
    out = Path(args.out_dir)
    write_atomic(out / "models.json", dump_json(models))
    write_atomic(out / "confusion.json", dump_json(reports))


def cmd_cefd(args) -> None:
    _require(args, "funds", "prices")
    records = ingest.read_funds(args.funds)
    price = ingest.read_prices(args.prices)
    snapshots = cefd.cefd_snapshots(records)
    out = Path(args.out_dir)
    write_atomic(out / "cefp.csv", cefd.snapshots_csv(snapshots))
    cefp = Series.from_pairs((s.sample_index, s.cefp) for s in snapshots)
    scan = align.scan_lags(cefp, price, args.lag_min, args.lag_max)
    write_atomic(out / "lag_scan.csv", scan.to_csv())
    write_atomic(out / "lag_scan.json", dump_json(scan.to_dict()))
    shifted = align.lag_shift(price, scan.best_lag)
    write_atomic(out / "fig_cefp.svg", line_chart(
        [Line("CEFP", cefp.index, cefp.values),
         Line(f"price lagged {scan.best_lag}", shifted.index, shifted.values)],
        f"CEFP and {scan.best_lag}-sample lagged price"))


def cmd_synth(args) -> None:
    cfg = ingest.SyntheticConfig(
        n_samples=args.n_samples, tweets_per_sample=args.tweets_per_sample,
        planted_lag=args.planted_lag, noise_sigma=args.noise_sigma, seed=args.seed,
    )
    batches, price = ingest.generate_synthetic(cfg, _lexicon(args))
    out = Path(args.out_dir)
    write_atomic(out / "tweets.csv", ingest.tweets_csv(batches))
    write_atomic(out / "prices.csv", ingest.prices_csv(price))


def cmd_pipeline(args) -> None:
    _require(args, "tweets", "prices")
    cmd_score(args)
    args.tss = str(Path(args.out_dir) / "tss.csv")
    indicator = read_series_csv(args.tss, "tss")
    price = ingest.read_prices(args.prices)
    lag = analyze(indicator, price, Path(args.out_dir), lag_min=args.lag_min, lag_max=args.lag_max,
                  degree=args.degree, tss_b=args.tss_b, split=args.split)
    if args.lag is None:
        args.lag = lag
    cmd_classify(args)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tssbaseline", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *flags):
        p.add_argument("--out-dir", default=".", help="directory for all outputs")
        if "lexicon" in flags:
            p.add_argument("--lexicon-pos", help="positive wordlist (default: shipped lexicon)")
            p.add_argument("--lexicon-neg", help="negative wordlist (default: shipped lexicon)")
        if "lags" in flags:
            p.add_argument("--lag-min", type=int, default=-30)
            p.add_argument("--lag-max", type=int, default=30)
        if "analysis" in flags:
            p.add_argument("--degree", type=int, default=regression.DEFAULT_DEGREE)
            p.add_argument("--tss-b", type=float, help="fixed baseline instead of selecting one")
            p.add_argument("--split", type=float, help="train fraction; the rest is held out")
        if "classify" in flags:
            p.add_argument("--lag", type=int, help="lag for classification (default: best scanned lag)")
            p.add_argument("--window", type=int, default=1, help="number of consecutive TSS values per row")

    p = sub.add_parser("score", help="tweets -> tss.csv, corpus.csv")
    p.add_argument("--tweets")
    common(p, "lexicon")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("analyze", help="tss.csv + prices.csv -> lag scan, fits, baseline, regions")
    p.add_argument("--tss")
    p.add_argument("--prices")
    common(p, "lags", "analysis")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="tss.csv + prices.csv -> models.json, confusion.json")
    p.add_argument("--tss")
    p.add_argument("--prices")
    common(p, "lags", "analysis", "classify")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cefd", help="funds.csv + prices.csv -> cefp.csv, lag_scan.csv")
    p.add_argument("--funds")
    p.add_argument("--prices")
    common(p, "lags")
    p.set_defaults(func=cmd_cefd)

    p = sub.add_parser("synth", help="write a planted-lag synthetic tweets.csv and prices.csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-samples", type=int, default=101)
    p.add_argument("--tweets-per-sample", type=int, default=5000)
    p.add_argument("--planted-lag", type=int, default=15)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    common(p, "lexicon")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pipeline", help="score, analyze and classify in one go")
    p.add_argument("--tweets")
    p.add_argument("--prices")
    common(p, "lexicon", "lags", "analysis", "classify")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors exit 1, --help exits 0
        return int(exc.code or 0)
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
