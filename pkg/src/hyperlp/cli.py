"""Pipeline command line: split -> features -> mi / predict -> report.

Every stage reads only the persisted outputs of earlier stages, so the
pipeline is restartable, and all randomness flows from seeds named in the
config file.  Exit codes: 0 ok, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path

import click

from .boosting import ClassifierConfig
from .evaluation import (
    evaluate_combination,
    rank_performance,
    read_eval_results,
    write_eval_results,
    write_rank_summary,
)
from .features import COMBO_TAGS, ComboSpec, FeatureTable, Representation, compute_features
from .hypergraph import load_benson
from .mi import BinningSpec, mi_report, write_mi_report
from .similarity import BasePredictor
from .split import SplitSpec, load_prepared, prepare, save_prepared, temporal_threshold


@dataclasses.dataclass
class PipelineConfig:
    nverts: str
    simplices: str
    times: str | None
    output_dir: str
    split: SplitSpec
    binning: BinningSpec
    classifier: ClassifierConfig
    classification_ratio: float = 0.75
    classification_seed: int = 0

    def to_dict(self) -> dict:
        return {
            "dataset": {"nverts": self.nverts, "simplices": self.simplices, "times": self.times},
            "output_dir": self.output_dir,
            "split": dataclasses.asdict(self.split),
            "binning": dataclasses.asdict(self.binning),
            "classifier": dataclasses.asdict(self.classifier),
            "classification": {"ratio": self.classification_ratio, "seed": self.classification_seed},
        }


def load_config(path) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        dataset = raw["dataset"]
        split_raw = dict(raw.get("split", {}))
        split_raw.setdefault("mode", "structural")
        cls_raw = dict(raw.get("classification", {}))
        return PipelineConfig(
            nverts=dataset["nverts"],
            simplices=dataset["simplices"],
            times=dataset.get("times"),
            output_dir=raw["output_dir"],
            split=SplitSpec(**split_raw),
            binning=BinningSpec(**raw.get("binning", {})),
            classifier=ClassifierConfig(**raw.get("classifier", {})),
            classification_ratio=float(cls_raw.get("ratio", 0.75)),
            classification_seed=int(cls_raw.get("seed", 0)),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"invalid config {path}: {exc}") from exc


def _echo_effective_config(config: PipelineConfig) -> None:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "effective_config.json", "w", encoding="ascii", newline="") as fh:
        fh.write(json.dumps(config.to_dict(), sort_keys=True, indent=2) + "\n")


def _load_hypergraph(config: PipelineConfig):
    return load_benson(config.nverts, config.simplices, config.times)


config_option = click.option(
    "--config", "config_path", required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Pipeline config file (JSON).",
)


@click.group()
def cli():
    """Hypergraph link prediction pipeline."""


@cli.command("split")
@config_option
@click.option("--mode", type=click.Choice(["temporal", "structural"]), default=None,
              help="Override the split mode from the config.")
@click.option("--seed", type=int, default=None, help="Override the split seed.")
def cmd_split(config_path, mode, seed):
    """Prepare train/test data and persist it under <output_dir>/split."""
    config = load_config(config_path)
    spec = config.split
    if mode is not None:
        spec = dataclasses.replace(spec, mode=mode)
    if seed is not None:
        spec = dataclasses.replace(spec, seed=seed)
    config.split = spec
    _echo_effective_config(config)

    hypergraph = _load_hypergraph(config)
    prepared = prepare(hypergraph, spec)
    meta = {"mode": spec.mode, "rho": spec.rho, "p": spec.p, "seed": spec.seed}
    if spec.mode == "temporal":
        meta["time_threshold"] = temporal_threshold(hypergraph, spec.rho)
    out = Path(config.output_dir) / "split"
    save_prepared(prepared, out, extra_meta=meta)
    click.echo(f"wrote split to {out} ({len(prepared.test_links)} links, "
               f"{len(prepared.test_nonlinks)} non-links)")


@cli.command("features")
@config_option
def cmd_features(config_path):
    """Compute the full score table for every test pair."""
    config = load_config(config_path)
    _echo_effective_config(config)
    prepared, _ = load_prepared(Path(config.output_dir) / "split")
    if prepared.n_pairs == 0:
        raise ValueError("empty test set: the split produced no pairs to score")
    table = compute_features(prepared)
    out = Path(config.output_dir) / "features.csv"
    table.write_csv(out)
    click.echo(f"wrote {table.n_rows} rows x {len(table.columns)} score columns to {out}")


@cli.command("mi")
@config_option
@click.option("--n-bins", type=int, default=None, help="Override the bin count.")
def cmd_mi(config_path, n_bins):
    """Mutual information of every feature column with the link label."""
    config = load_config(config_path)
    if n_bins is not None:
        config.binning = dataclasses.replace(config.binning, n_bins=n_bins)
    _echo_effective_config(config)
    table = FeatureTable.read_csv(Path(config.output_dir) / "features.csv")
    report = mi_report(table, config.binning)
    out = Path(config.output_dir) / "mi.csv"
    write_mi_report(out, report)
    click.echo(f"wrote {len(report)} MI rows to {out}")


def _parse_base(value: str) -> BasePredictor:
    try:
        return BasePredictor.from_token(value)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _requested_combos(mode: str, combo: str | None, base: str | None) -> list[ComboSpec]:
    if mode == "standalone":
        reps = [Representation.from_token(combo)] if combo else list(Representation)
        bases = [_parse_base(base)] if base else list(BasePredictor)
        return [ComboSpec("standalone", r.value, b) for b in bases for r in reps]
    if combo is not None and combo not in COMBO_TAGS:
        raise click.UsageError(f"unknown combo {combo!r}; valid: {', '.join(COMBO_TAGS)}")
    tags = [combo] if combo else list(COMBO_TAGS)
    if mode == "micro":
        bases = [_parse_base(base)] if base else list(BasePredictor)
        return [ComboSpec("micro", t, b) for b in bases for t in tags]
    if base is not None:
        raise click.UsageError("macro mode takes no --base")
    return [ComboSpec("macro", t) for t in tags]


@cli.command("predict")
@config_option
@click.option("--mode", required=True, type=click.Choice(["standalone", "micro", "macro"]))
@click.option("--combo", default=None, help="Restrict to one combination (default: all).")
@click.option("--base", default=None, help="Restrict to one base predictor (default: all).")
@click.option("--seed", type=int, default=None,
              help="Override both the classifier seed and the classification-split seed.")
def cmd_predict(config_path, mode, combo, base, seed):
    """Evaluate feature combinations; one AUC row per combination."""
    config = load_config(config_path)
    if seed is not None:
        config.classifier = dataclasses.replace(config.classifier, seed=seed)
        config.classification_seed = seed
    combos = _requested_combos(mode, combo, base)
    try:
        if mode == "standalone" and combo:
            Representation.from_token(combo)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    _echo_effective_config(config)

    table = FeatureTable.read_csv(Path(config.output_dir) / "features.csv")
    results = [
        evaluate_combination(
            table, c, config.classifier,
            ratio=config.classification_ratio, split_seed=config.classification_seed,
        )
        for c in combos
    ]
    out = Path(config.output_dir) / f"predictions_{mode}.csv"
    write_eval_results(out, results, seed=config.classifier.seed)
    click.echo(f"wrote {len(results)} AUC rows to {out}")


@cli.command("report")
@config_option
def cmd_report(config_path):
    """Aggregate prediction AUCs into rank summaries per mode."""
    config = load_config(config_path)
    _echo_effective_config(config)
    out_dir = Path(config.output_dir)
    wrote = []
    for mode in ("standalone", "micro", "macro"):
        src = out_dir / f"predictions_{mode}.csv"
        if not src.exists():
            continue
        rows = read_eval_results(src)
        grid: dict[str, dict[str, float]] = {}
        for r in rows:
            alt = r["combo"]
            group = r["base"] if mode != "macro" else "all"
            grid.setdefault(alt, {})[group] = float(r["auc"])
        summary = rank_performance(grid)
        dest = out_dir / f"rank_{mode}.csv"
        write_rank_summary(dest, summary)
        wrote.append(str(dest))
    if not wrote:
        raise ValueError(f"no predictions_*.csv found under {out_dir}; run predict first")
    click.echo("wrote " + ", ".join(wrote))


@cli.command("run")
@config_option
def cmd_run(config_path):
    """Convenience: split, features, mi, and all three predict modes."""
    for args in (
        ["split", "--config", config_path],
        ["features", "--config", config_path],
        ["mi", "--config", config_path],
        ["predict", "--config", config_path, "--mode", "standalone"],
        ["predict", "--config", config_path, "--mode", "micro"],
        ["predict", "--config", config_path, "--mode", "macro"],
        ["report", "--config", config_path],
    ):
        cli.main(args=args, standalone_mode=False)


def run(argv=None) -> int:
    """Dispatch with exit-code discipline: 0 ok, 1 usage, 2 runtime."""
    try:
        cli.main(args=argv, standalone_mode=False, prog_name="hyperlp")
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.Abort:
        click.echo("aborted", err=True)
        return 130
    except (ValueError, KeyError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
