"""Command-line front-end.

Subcommands: synth, train, train-baseline, predict, eval, bench, plotdata.
Exit codes: 0 success, 1 usage error, 2 data or file error, 3 numerical
failure. Every command is deterministic given --seed; artifacts are written
with full float precision so repeated runs are byte identical (bench timing
values are wall-clock measurements and vary between runs).

The SIGP_THREADS environment variable caps BLAS parallelism; it is applied
before numpy is first imported, which is why the numeric imports live
inside the command functions.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import DataError, DimensionError, SigpError

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")

_LENGTHSCALE_CHOICES = "a positive number, 'median', or 'cv'"

# Multipliers applied to the median-heuristic lengthscale during CV.
_CV_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)
_CV_FOLDS = 5


def _apply_thread_cap():
    cap = os.environ.get("SIGP_THREADS")
    if cap:
        for var in _THREAD_VARS:
            os.environ.setdefault(var, cap)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _nonnegative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _nonnegative_float(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def _lengthscale_arg(text):
    if text in ("median", "cv"):
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"lengthscale must be {_LENGTHSCALE_CHOICES}, got {text!r}"
        ) from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"lengthscale must be positive, got {text}")
    return value


def _ranges_arg(text):
    ranges = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(
                f"ranges look like 'lo:hi[,lo:hi...]', got {text!r}"
            )
        ranges.append((float(lo), float(hi)))
    return tuple(ranges)


def _int_list_arg(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None
    if not values or any(v < 2 for v in values):
        raise argparse.ArgumentTypeError("need at least one size of 2 or more")
    return values


def _label_column_arg(text):
    if text == "last":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"label column must be an integer or 'last', got {text!r}"
        ) from None


def _add_csv_flags(p):
    p.add_argument("--header", action="store_true",
                   help="skip the first line of input CSV files")
    p.add_argument("--label-column", type=_label_column_arg, default="last",
                   help="index of the label column, or 'last' (default)")
    p.add_argument("--delimiter", default=",", help="CSV field delimiter")


def _read_dataset(args, path):
    from .data_io import load_csv

    return load_csv(path, header=args.header, label_column=args.label_column,
                    delimiter=args.delimiter)


def _resolve_lengthscale(choice, X):
    from .kernels import median_heuristic

    if choice == "median":
        return float(median_heuristic(X))
    return float(choice)


def _kernel_spec(family, lengthscale):
    from .kernels import KernelSpec

    return KernelSpec(family, lengthscale=lengthscale)


def _fit_single(cache, targets, args, n_classes=None):
    """One SDR basis + EM fit with the flags applied."""
    from .model import EmConfig, em_fit
    from .sdr import fit_sdr

    method = "response_kernel" if args.sdr == "ykernel" else "sliced"
    basis = fit_sdr(cache, targets, args.rank, method=method, slices=args.slices,
                    zeta=args.zeta, zeta1=args.zeta1, n_classes=n_classes)
    config = EmConfig(max_iter=args.max_iter, tol=args.tol, xi=args.xi)
    model, trace = em_fit(cache, targets, basis, config)
    return basis, model, trace


def _cv_folds(n, seed):
    import numpy as np

    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(perm[k::_CV_FOLDS]) for k in range(_CV_FOLDS)]


def _cv_lengthscale(args, ds):
    """5-fold selection over median-heuristic multiples.

    Regression picks the lowest NLPD; binary classification the highest F1;
    multi-class the highest accuracy. Ties go to the shorter lengthscale.
    """
    import numpy as np

    from .eval import accuracy, f1, nlpd, ovr_fit, ovr_predict, threshold_binary
    from .data_io import binary_pm1
    from .kernels import GramCache, median_heuristic
    from .model import predict

    base = float(median_heuristic(ds.X))
    folds = _cv_folds(ds.n, args.seed)
    best = None
    for mult in _CV_GRID:
        ell = base * mult
        scores = []
        for k in range(_CV_FOLDS):
            test_idx = folds[k]
            train_idx = np.setdiff1d(np.arange(ds.n), test_idx)
            if test_idx.size == 0 or train_idx.size < 4:
                continue
            cache = GramCache(_kernel_spec(args.kernel, ell), ds.X[train_idx])
            X_test, y_test = ds.X[test_idx], ds.y[test_idx]
            try:
                if ds.label_kind == "multiclass":
                    model, _ = ovr_fit(cache, ds.y[train_idx], args.rank,
                                       zeta=args.zeta)
                    scores.append(accuracy(ovr_predict(model, X_test), y_test))
                elif ds.label_kind == "binary":
                    targets = binary_pm1(ds.y)[train_idx]
                    _, model, _ = _fit_single(cache, targets, args, n_classes=2)
                    pred = threshold_binary(predict(model, X_test).mean)
                    scores.append(f1(pred, binary_pm1(ds.y)[test_idx]))
                else:
                    _, model, _ = _fit_single(cache, ds.y[train_idx], args)
                    scores.append(-nlpd(predict(model, X_test), y_test))
            except SigpError:
                scores.append(-np.inf)
        mean_score = float(np.mean(scores)) if scores else -np.inf
        if best is None or mean_score > best[0]:
            best = (mean_score, ell)
    return best[1]


def cmd_synth(args) -> int:
    from .data_io import save_csv, synth_four_class, synth_sinusoid

    if args.experiment == "sinusoid":
        ds = synth_sinusoid(args.n, x_ranges=args.ranges,
                            noise_var=args.noise_var, seed=args.seed)
    else:
        ds = synth_four_class(args.n_per_class, seed=args.seed)
    save_csv(ds, args.out)
    print(f"wrote {ds.n} rows to {args.out}")
    return 0


def _em_report(trace, model):
    return {
        "iterations": trace.n_iter,
        "converged": trace.converged,
        "final_loglik": trace.loglik[-1],
        "sigma2": model.sigma2,
    }


def cmd_train(args) -> int:
    import warnings

    from .data_io import binary_pm1
    from .eval import ovr_fit, save_ovr_model
    from .kernels import GramCache
    from .model import EmConfig, save_model
    from .sdr import rank_bound, suggest_rank
    from .serialize import doc_text, write_atomic

    ds = _read_dataset(args, args.data)
    if args.lengthscale == "cv":
        lengthscale = _cv_lengthscale(args, ds)
    else:
        lengthscale = _resolve_lengthscale(args.lengthscale, ds.X)
    cache = GramCache(_kernel_spec(args.kernel, lengthscale), ds.X)

    with warnings.catch_warnings():
        warnings.simplefilter("always", RuntimeWarning)
        if ds.label_kind == "multiclass":
            from .sdr import fit_sdr

            config = EmConfig(max_iter=args.max_iter, tol=args.tol, xi=args.xi)
            model, traces = ovr_fit(cache, ds.y, args.rank, zeta=args.zeta,
                                    config=config)
            save_ovr_model(model, args.out)
            basis_tau = fit_sdr(cache, ds.y, args.rank, zeta=args.zeta,
                                n_classes=model.classes.shape[0]).tau
            em_part = [_em_report(t, m) for t, m in zip(traces, model.models)]
        else:
            targets = ds.y
            n_classes = None
            if ds.label_kind == "binary":
                targets = binary_pm1(ds.y)
                n_classes = 2
            basis, model, trace = _fit_single(cache, targets, args,
                                              n_classes=n_classes)
            save_model(model, args.out)
            basis_tau = basis.tau
            em_part = _em_report(trace, model)

    bound = rank_bound(ds.n, 0.05)
    report = {
        "data": {"n": ds.n, "d": ds.d, "label_kind": ds.label_kind},
        "kernel": {"family": args.kernel, "lengthscale": lengthscale},
        "rank": args.rank,
        "sdr": args.sdr,
        "tau": list(basis_tau),
        "rank_bound": bound,
        "suggested_rank": suggest_rank(basis_tau, ds.n, 0.05),
        "em": em_part,
        "model_file": str(args.out),
    }
    text = doc_text(report)
    if args.report:
        write_atomic(args.report, text)
    print(text, end="")
    return 0


def cmd_train_baseline(args) -> int:
    from .baseline import gp_fit, save_gp_model
    from .kernels import GramCache
    from .serialize import doc_text, write_atomic

    ds = _read_dataset(args, args.data)
    if args.lengthscale == "cv":
        lengthscale = _cv_baseline_lengthscale(args, ds)
    else:
        lengthscale = _resolve_lengthscale(args.lengthscale, ds.X)
    cache = GramCache(_kernel_spec(args.kernel, lengthscale), ds.X)
    model = gp_fit(cache, ds.y, mean=args.mean)
    save_gp_model(model, args.out)
    report = {
        "data": {"n": ds.n, "d": ds.d},
        "kernel": {"family": args.kernel, "lengthscale": lengthscale},
        "mean": args.mean,
        "noise2": model.noise2,
        "loglik": model.loglik,
        "model_file": str(args.out),
    }
    text = doc_text(report)
    if args.report:
        write_atomic(args.report, text)
    print(text, end="")
    return 0


def _cv_baseline_lengthscale(args, ds):
    import numpy as np

    from .baseline import gp_fit, gp_predict
    from .eval import nlpd
    from .kernels import GramCache, median_heuristic

    base = float(median_heuristic(ds.X))
    folds = _cv_folds(ds.n, args.seed)
    best = None
    for mult in _CV_GRID:
        ell = base * mult
        scores = []
        for k in range(_CV_FOLDS):
            test_idx = folds[k]
            train_idx = np.setdiff1d(np.arange(ds.n), test_idx)
            if test_idx.size == 0 or train_idx.size < 4:
                continue
            cache = GramCache(_kernel_spec(args.kernel, ell), ds.X[train_idx])
            model = gp_fit(cache, ds.y[train_idx], mean=args.mean)
            scores.append(-nlpd(gp_predict(model, ds.X[test_idx]), ds.y[test_idx]))
        mean_score = float(np.mean(scores)) if scores else -np.inf
        if best is None or mean_score > best[0]:
            best = (mean_score, ell)
    return best[1]


def _load_any_single_model(path):
    """Load a single-output model file regardless of which trainer wrote it."""
    import json

    from .baseline import GP_MODEL_FORMAT, gp_predict, load_gp_model
    from .model import MODEL_FORMAT, load_model, predict

    with open(path, "r") as handle:
        try:
            tag = json.loads(handle.read()).get("format")
        except (json.JSONDecodeError, AttributeError):
            raise DataError("not a valid model file") from None
    if tag == MODEL_FORMAT:
        return load_model(path), predict
    if tag == GP_MODEL_FORMAT:
        return load_gp_model(path), gp_predict
    raise DataError(
        f"unsupported model format {tag!r} for predict; "
        "use plotdata for one-vs-rest ensembles"
    )


def _read_feature_matrix(args, path, d):
    """Features from CSV: width d means features only, d+1 means a trailing
    label column to drop."""
    import csv as csv_mod

    import numpy as np

    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv_mod.reader(handle, delimiter=args.delimiter)
        for lineno, row in enumerate(reader, start=1):
            if args.header and lineno == 1:
                continue
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise DataError(f"line {lineno}: non-numeric field", line=lineno) from None
    if not rows:
        raise DataError("no data rows in file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DataError("rows have inconsistent field counts")
    X = np.asarray(rows, dtype=float)
    if width == d + 1:
        X = X[:, :d]
    elif width != d:
        raise DimensionError(
            f"model expects {d} features; file has {width} columns"
        )
    return X


def cmd_predict(args) -> int:
    from .serialize import write_atomic

    model, predict_fn = _load_any_single_model(args.model)
    X = _read_feature_matrix(args, args.data, model.d)
    out = predict_fn(model, X)
    lines = ["mean,variance"]
    for m, v in zip(out.mean, out.variance):
        lines.append(f"{m:.17g},{v:.17g}")
    write_atomic(args.out, "\n".join(lines) + "\n")
    print(f"wrote {out.mean.shape[0]} predictions to {args.out}")
    return 0


def _read_predictions(path):
    import numpy as np

    from .model import PredictiveDistribution

    means, variances = [], []
    with open(path, "r", encoding="utf-8") as handle:
        first = handle.readline()
        if first.strip() != "mean,variance":
            raise DataError("predictions file must start with 'mean,variance'")
        for lineno, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DataError(f"line {lineno}: expected two fields", line=lineno)
            try:
                means.append(float(parts[0]))
                variances.append(float(parts[1]))
            except ValueError:
                raise DataError(f"line {lineno}: non-numeric field", line=lineno) from None
    return PredictiveDistribution(mean=np.array(means), variance=np.array(variances))


def cmd_eval(args) -> int:
    from .data_io import binary_pm1
    from .eval import f1, mse, nlpd, threshold_binary

    dist = _read_predictions(args.predictions)
    truth = _read_dataset(args, args.truth)
    if args.metric == "mse":
        value = mse(dist.mean, truth.y)
    elif args.metric == "nlpd":
        value = nlpd(dist, truth.y)
    else:
        value = f1(threshold_binary(dist.mean), binary_pm1(truth.y))
    print(f"{value:.10g}")
    return 0


def cmd_bench(args) -> int:
    import time

    from .data_io import synth_sinusoid
    from .kernels import GramCache
    from .model import EmConfig, em_fit
    from .sdr import fit_sdr

    lines = ["n,iterations,seconds_per_iter"]
    for n in args.n_list:
        ds = synth_sinusoid(n, noise_var=0.01, seed=args.seed)
        cache = GramCache(_kernel_spec("rbf", 1.0), ds.X)
        basis = fit_sdr(cache, ds.y, args.rank)
        config = EmConfig(max_iter=args.iters, tol=0.0)
        # Untimed warmup pass so allocator and cache effects of the first
        # call do not distort the smallest sizes; the reported figure is
        # the fastest of the repeats, which filters scheduler noise.
        em_fit(cache, ds.y, basis, EmConfig(max_iter=2, tol=0.0))
        elapsed = None
        for _ in range(args.repeats):
            start = time.perf_counter()
            em_fit(cache, ds.y, basis, config)
            took = time.perf_counter() - start
            elapsed = took if elapsed is None else min(elapsed, took)
        lines.append(f"{n},{args.iters},{elapsed / args.iters:.6g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        from .serialize import write_atomic

        write_atomic(args.out, text)
    print(text, end="")
    return 0


def _interval_columns(dist):
    import numpy as np

    half = 1.96 * np.sqrt(dist.variance)
    return dist.mean - half, dist.mean + half


def cmd_plotdata(args) -> int:
    import math as _math

    import numpy as np

    from .serialize import write_atomic

    if args.experiment == "sinusoid":
        model, predict_fn = _load_any_single_model(args.model)
        x = np.linspace(args.x_min, args.x_max, args.grid)
        out = predict_fn(model, x[:, None])
        lo, hi = _interval_columns(out)
        columns = {"x": x, "sigp_mean": out.mean, "sigp_variance": out.variance,
                   "sigp_lo": lo, "sigp_hi": hi}
        if args.baseline:
            from .baseline import gp_predict, load_gp_model

            gp = load_gp_model(args.baseline)
            gout = gp_predict(gp, x[:, None])
            glo, ghi = _interval_columns(gout)
            columns.update({"gp_mean": gout.mean, "gp_variance": gout.variance,
                            "gp_lo": glo, "gp_hi": ghi})
    else:
        from .eval import load_ovr_model, ovr_scores

        model = load_ovr_model(args.model)
        side = max(2, _math.isqrt(args.grid))
        g = np.linspace(args.x_min, args.x_max, side)
        xx, yy = np.meshgrid(g, g)
        Z = np.column_stack([xx.ravel(), yy.ravel()])
        scores = ovr_scores(model, Z)
        labels = model.classes[np.argmax(scores, axis=1)]
        columns = {"x1": Z[:, 0], "x2": Z[:, 1]}
        for j, c in enumerate(model.classes):
            columns[f"score_{int(c)}"] = scores[:, j]
        columns["label"] = labels

    names = list(columns)
    rows = [",".join(names)]
    n_rows = len(next(iter(columns.values())))
    for i in range(n_rows):
        rows.append(",".join(f"{columns[k][i]:.17g}" for k in names))
    write_atomic(args.out, "\n".join(rows) + "\n")
    print(f"wrote {n_rows} rows to {args.out}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sigp",
        description="Low-rank Gaussian process regression and classification "
                    "on an estimated sufficient subspace of the RKHS.",
    )
    parser.add_argument("--config", default=None,
                        help="file of key=value lines providing flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)
    registry = {}

    p = sub.add_parser("synth", help="generate a synthetic dataset CSV")
    p.add_argument("--experiment", choices=("sinusoid", "fourclass"),
                   default="sinusoid")
    p.add_argument("--n", type=_positive_int, default=100,
                   help="number of sinusoid points")
    p.add_argument("--n-per-class", type=_positive_int, default=30,
                   help="points per class for fourclass")
    p.add_argument("--noise-var", type=_nonnegative_float, default=0.01)
    p.add_argument("--ranges", type=_ranges_arg, default=((0.0, 7.0),),
                   help="sinusoid x ranges as 'lo:hi[,lo:hi...]'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit a low-rank model and write it")
    p.add_argument("data")
    _add_csv_flags(p)
    p.add_argument("--kernel", choices=("rbf", "linear"), default="rbf")
    p.add_argument("--lengthscale", type=_lengthscale_arg, default="median",
                   help=f"{_LENGTHSCALE_CHOICES} (default median heuristic)")
    p.add_argument("--rank", type=_positive_int, required=True)
    p.add_argument("--sdr", choices=("sliced", "ykernel"), default="sliced")
    p.add_argument("--slices", type=_positive_int, default=None)
    p.add_argument("--zeta", type=_positive_float, default=None)
    p.add_argument("--zeta1", type=_positive_float, default=None)
    p.add_argument("--xi", type=_positive_float, default=1e-4)
    p.add_argument("--max-iter", type=_nonnegative_int, default=500)
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("train-baseline", help="fit the exact GP baseline")
    p.add_argument("data")
    _add_csv_flags(p)
    p.add_argument("--kernel", choices=("rbf", "linear"), default="rbf")
    p.add_argument("--lengthscale", type=_lengthscale_arg, default="median")
    p.add_argument("--mean", choices=("zero", "linear"), default="linear")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_train_baseline)

    p = sub.add_parser("predict", help="write mean,variance for each data row")
    p.add_argument("model")
    p.add_argument("data")
    _add_csv_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="score predictions against labels")
    p.add_argument("predictions")
    p.add_argument("truth")
    _add_csv_flags(p)
    p.add_argument("--metric", choices=("f1", "mse", "nlpd"), required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="time EM iterations across sample sizes")
    p.add_argument("--n-list", type=_int_list_arg, required=True)
    p.add_argument("--rank", type=_positive_int, default=2)
    p.add_argument("--iters", type=_positive_int, default=5)
    p.add_argument("--repeats", type=_positive_int, default=3,
                   help="timed repeats per size; the fastest is reported")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("plotdata", help="grid evaluations for figures")
    p.add_argument("--experiment", choices=("sinusoid", "fourclass"),
                   required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--baseline", default=None)
    p.add_argument("--grid", type=_positive_int, default=100,
                   help="total rows (fourclass uses the square grid side "
                        "isqrt(grid))")
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=7.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plotdata)

    for name, choice in sub.choices.items():
        registry[name] = choice
    return parser, registry


def _load_config_defaults(path) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DataError(
                    f"line {lineno}: config entries look like key=value",
                    line=lineno,
                )
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(subparsers, raw):
    """Turn key=value entries into flag defaults on every subcommand that
    knows the key. Explicit flags still win; a key satisfied by the config
    stops being required."""
    for sub in subparsers.values():
        for action in sub._actions:
            if action.dest not in raw:
                continue
            value = raw[action.dest]
            if action.nargs == 0 and isinstance(action.const, bool):
                action.default = value.lower() == "true"
            elif action.type is not None:
                try:
                    action.default = action.type(value)
                except (argparse.ArgumentTypeError, ValueError) as exc:
                    raise DataError(f"config value for {action.dest}: {exc}")
            else:
                action.default = value
            if action.choices is not None and action.default not in action.choices:
                raise DataError(
                    f"config value for {action.dest} must be one of "
                    f"{tuple(action.choices)}"
                )
            action.required = False


def main(argv=None) -> int:
    _apply_thread_cap()
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()

    # Pre-scan for --config so its values become parser defaults that
    # explicit flags still override.
    config_path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            config_path = argv[i + 1]
        elif token.startswith("--config="):
            config_path = token.split("=", 1)[1]

    try:
        if config_path:
            _apply_config(subparsers, _load_config_defaults(config_path))
        args = parser.parse_args(argv)
        return args.func(args)
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SigpError, ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; remap to 1.
        code = exc.code if isinstance(exc.code, int) else 0
        return 1 if code != 0 else 0


if __name__ == "__main__":
    sys.exit(main())
