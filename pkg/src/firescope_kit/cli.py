import sys
import json
import logging
from pathlib import Path
from typing import Any, List, Optional

import click
import numpy as np
import typer
from pydantic import ValidationError as PydanticValidationError
from typer.core import TyperGroup

from firescope_kit.config import ConfigManager
from firescope_kit.constants import (
    CONTAINER_SUFFIX,
    DEFAULT_CELL_DEG,
    DEFAULT_SEED,
    DEFAULT_TILE_SIZE,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
)
from firescope_kit.errors import FireScopeError, ValidationError
from firescope_kit.evaluate.container import load_raster, save_raster
from firescope_kit.evaluate.manifest import load_manifest
from firescope_kit.evaluate.report import emit_curves, emit_report, emit_tiles
from firescope_kit.evaluate.workers import run_evaluation
from firescope_kit.ingest.sampling import SplitSpec, build_candidates, stratified_split
from firescope_kit.ingest.tiling import tile_raster
from firescope_kit.interpret import PairedPrediction, consistency, fidelity
from firescope_kit.raster import apply_quintile, fit_quintile
from firescope_kit.training.reward import RewardConfig, parse_oracle_output, reward
from firescope_kit.utils.utils import atomic_write


class FskGroup(TyperGroup):
    """Maps every failure to the documented exit codes: 1 for bad input, 2 for I/O."""

    def main(self, *args: Any, standalone_mode: bool = True, **kwargs: Any) -> Any:
        code = EXIT_OK
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
            if isinstance(rv, int):
                code = rv
        except click.UsageError as e:
            e.show()
            code = EXIT_VALIDATION
        except click.exceptions.Abort:
            typer.secho("⚠️ Interrupted by user", err=True, fg=typer.colors.YELLOW)
            code = EXIT_VALIDATION
        except (FireScopeError, PydanticValidationError, ValueError) as e:
            typer.secho(f"❌ {e}", err=True, fg=typer.colors.RED)
            code = EXIT_VALIDATION
        except OSError as e:
            typer.secho(f"❌ {e}", err=True, fg=typer.colors.RED)
            code = EXIT_IO
        if standalone_mode:
            sys.exit(code)
        return code


# Main CLI with overall description
desc = "Wildfire-risk benchmark toolkit: tiling, sampling, metrics, rewards and interpretability scores."
app = typer.Typer(help=desc, add_completion=False, cls=FskGroup)


@app.callback()
def _setup(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level."),
) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s: %(message)s",
        force=True,
    )


def _write_or_echo(text: str, out: Optional[Path], what: str) -> None:
    if out is None:
        typer.echo(text, nl=False)
        return
    atomic_write(out, text)
    typer.secho(f"✅ {what} written to {out}", fg=typer.colors.GREEN, err=True)


@app.command("config")
def config(
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Default worker count."),
    threshold: Optional[float] = typer.Option(None, "--threshold", help="Default IoU threshold."),
    ece_bins: Optional[int] = typer.Option(None, "--ece-bins", help="Default calibration bins."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Default seed."),
    tile_score: Optional[str] = typer.Option(None, "--tile-score", help="Tile pooling: mean or max."),
):
    """
    Save evaluation defaults to ~/.config/fsk/config.json
    """
    path = ConfigManager.set_defaults(
        jobs=jobs, threshold=threshold, ece_bins=ece_bins, seed=seed, tile_score=tile_score
    )
    typer.secho(f"Defaults saved to {path}", fg=typer.colors.GREEN)


@app.command("tile")
def tile(
    parent: Path = typer.Argument(..., help="Parent raster container."),
    out: Path = typer.Option(..., "--out", "-o", help="Directory for the tile containers."),
    size: int = typer.Option(DEFAULT_TILE_SIZE, "--size", "-s", help="Tile edge in pixels."),
    parent_id: Optional[str] = typer.Option(None, "--parent-id", help="Id prefix (default: file stem)."),
):
    """
    Cut a parent raster into non-overlapping square tiles.
    """
    pid = parent_id or parent.stem
    tiles = tile_raster(load_raster(parent), size=size, parent_id=pid)
    for geom, raster in tiles:
        save_raster(raster, out / f"{geom.tile_id}{CONTAINER_SUFFIX}", tile_id=geom.tile_id)
    logging.info("Cut %s into %d tiles of %dpx", parent, len(tiles), size)
    typer.secho(f"✅ {len(tiles)} tiles written to {out}", fg=typer.colors.GREEN)


@app.command("normalize")
def normalize(
    raster: Path = typer.Argument(..., help="Raster container to normalize."),
    reference: List[Path] = typer.Option(..., "--reference", "-r", help="Reference population container(s)."),
    out: Path = typer.Option(..., "--out", "-o", help="Output container."),
):
    """
    Quintile-normalize a raster into [0, 1] against a reference population.
    """
    population = np.concatenate([load_raster(p).valid_values() for p in reference])
    transform = fit_quintile(population)
    save_raster(apply_quintile(transform, load_raster(raster)), out)
    typer.secho(f"✅ Normalized raster written to {out}", fg=typer.colors.GREEN)


@app.command("sample")
def sample(
    candidates: Path = typer.Option(..., "--candidates", "-c", help="JSON list of candidate tiles."),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="JSON file for the {id: split} map."),
    train: int = typer.Option(1000, "--train", help="Tiles in the train split."),
    val: int = typer.Option(100, "--val", help="Tiles in the val split."),
    test: int = typer.Option(100, "--test", help="Tiles in the test split."),
    seed: int = typer.Option(DEFAULT_SEED, "--seed", help="Shuffle seed."),
    cell_deg: float = typer.Option(DEFAULT_CELL_DEG, "--cell-deg", help="Stratification cell size in degrees."),
):
    """
    Assign candidate tiles to train/val/test by geography and risk strata.
    """
    records = json.loads(candidates.read_text())
    if not isinstance(records, list):
        raise ValidationError("candidates file must hold a JSON list", field="candidates")
    spec = SplitSpec(target_counts={"train": train, "val": val, "test": test}, seed=seed)
    assignment = stratified_split(build_candidates(records, cell_deg), spec)
    text = json.dumps(dict(sorted(assignment.items())), indent=2) + "\n"
    _write_or_echo(text, out, "Split assignment")


@app.command("eval")
def evaluate(
    manifest: Path = typer.Option(..., "--manifest", "-m", help="Evaluation manifest (JSON)."),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Report file (stdout when omitted)."),
    fmt: str = typer.Option("json", "--format", "-f", help="Report format: json or csv."),
    threshold: Optional[float] = typer.Option(None, "--threshold", help="IoU binarization threshold."),
    ece_bins: Optional[int] = typer.Option(None, "--ece-bins", help="Calibration bins."),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Worker count (default: $FSK_JOBS or 1)."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed recorded in provenance."),
    tile_score: Optional[str] = typer.Option(None, "--tile-score", help="Tile pooling: mean or max."),
    config_file: Optional[Path] = typer.Option(None, "--config", help="JSON config overriding flags."),
    curves: Optional[Path] = typer.Option(None, "--curves", help="Write ROC / calibration rows here."),
    tiles: Optional[Path] = typer.Option(None, "--tiles", help="Write per-tile OOD error rows here."),
):
    """
    Evaluate predictions listed in a manifest and write a metric report.
    """
    if fmt not in ("json", "csv"):
        raise ValidationError(f"unknown format {fmt!r}", field="format")
    cfg = ConfigManager.load(
        overrides={
            "threshold": threshold,
            "ece_bins": ece_bins,
            "jobs": jobs,
            "seed": seed,
            "tile_score": tile_score,
        },
        config_file=config_file,
    )
    result = run_evaluation(load_manifest(manifest), cfg)
    if curves is not None:
        atomic_write(curves, emit_curves(result.curves))
        logging.info("Curve rows → %s", curves)
    if tiles is not None:
        atomic_write(tiles, emit_tiles(result.tiles))
        logging.info("Tile error rows → %s", tiles)
    _write_or_echo(emit_report(result.report, fmt), out, "Report")


@app.command("reward")
def reward_command(
    pred: Optional[int] = typer.Option(None, "--pred", help="Parsed ordinal prediction 0..9."),
    actual: int = typer.Option(..., "--actual", help="Ground-truth ordinal level 0..9."),
    format_ok: bool = typer.Option(False, "--format-ok/--format-bad", help="Whether the answer format matched."),
    text: Optional[Path] = typer.Option(None, "--text", help="Raw completion; parsed instead of --pred/--format-ok."),
    frequencies: Optional[str] = typer.Option(None, "--frequencies", help="10 comma-separated class counts."),
):
    """
    Score one Oracle answer: 0.9 * accuracy + 0.1 * format.
    """
    if text is not None:
        pred, format_ok = parse_oracle_output(text.read_text())
    freqs = None
    if frequencies:
        try:
            freqs = [float(x) for x in frequencies.split(",")]
        except ValueError as e:
            raise ValidationError(str(e), field="frequencies") from e
    cfg = RewardConfig(class_frequencies=freqs)
    typer.echo(repr(reward(pred, actual, format_ok, cfg)))


@app.command("interp")
def interp(
    kind: str = typer.Option(..., "--kind", "-k", help="perturbed (fidelity) or paraphrased (consistency)."),
    orig: Path = typer.Option(..., "--orig", help="Prediction from the original reasoning."),
    mod: Path = typer.Option(..., "--mod", help="Prediction from the modified reasoning."),
):
    """
    Fidelity or consistency of a pair of predictions.
    """
    if kind not in ("perturbed", "paraphrased"):
        raise ValidationError(f"unknown kind {kind!r}", field="kind")
    pair = PairedPrediction(original=load_raster(orig), modified=load_raster(mod), kind=kind)
    score = fidelity(pair) if kind == "perturbed" else consistency(pair)
    typer.echo(repr(score))


def main() -> None:
    app()


if __name__ == "__main__":
    main()
