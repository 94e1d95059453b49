#!/usr/bin/env python3
"""
Command Line Interface for the RIS passive radar toolkit.

CSV results go to ``--out`` or stdout; everything else goes to stderr.
"""

from contextlib import contextmanager
from typing import List, Optional

import pandas as pd
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.json import JSON
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from src.config.settings import (
    Algorithm,
    ExperimentConfig,
    SweepKind,
    create_default_config_file,
    get_config,
    load_config_from_file,
    set_config,
)
from src.estimators.peaks import normalize_spectrum
from src.exceptions import RadarToolkitError
from src.harness.experiment import EstimatorInputs, build_scene, make_estimator, per_epoch_spectra, prepare_inputs
from src.harness.selftest import run_selftest
from src.harness.sweeps import run_sweep
from src.simulation.scene_io import load_scene, save_scene
from src.utils.io_utils import write_frame
from src.utils.logging_utils import setup_logging
from src.utils.workflow_utils import RunTimer

app = typer.Typer(help="RIS-aided passive radar simulation and NLMS localization")
console = Console(stderr=True)


def _one_line(error: Exception) -> str:
    if isinstance(error, ValidationError):
        return "; ".join(f"{'.'.join(map(str, e['loc'])) or 'config'}: {e['msg']}" for e in error.errors())
    return str(error).splitlines()[0] if str(error) else type(error).__name__


@contextmanager
def _handle_errors():
    try:
        yield
    except (RadarToolkitError, ValidationError, OSError) as e:
        console.print(f"❌ {_one_line(e)}", style="red", highlight=False)
        raise typer.Exit(code=1)


def _parse_m(m: Optional[str]) -> Optional[List[int]]:
    if m is None:
        return None
    try:
        return [int(item) for item in m.split(",") if item.strip()]
    except ValueError:
        raise typer.BadParameter(f"--m expects comma-separated integers, got {m!r}")


def _load_config(
    config_file: Optional[str],
    seed: Optional[int] = None,
    algorithm: Optional[Algorithm] = None,
    m_values: Optional[List[int]] = None,
    trials: Optional[int] = None,
    out: Optional[str] = None,
) -> ExperimentConfig:
    config = load_config_from_file(config_file) if config_file else get_config()
    overrides = {
        "seed": seed,
        "algorithm": algorithm,
        "m_values": m_values,
        "trials": trials,
        "output_path": out,
    }
    data = config.model_dump()
    data.update({k: v for k, v in overrides.items() if v is not None})
    config = ExperimentConfig(**data)
    set_config(config)
    setup_logging(config.logging)
    return config


def _emit(frame: pd.DataFrame, out: Optional[str]):
    text = write_frame(frame, out)
    if out:
        console.print(f"💾 Results saved to: {out}", style="green")
    else:
        typer.echo(text, nl=False)


def _dump_inputs(inputs: EstimatorInputs, v_path: Optional[str], z_path: Optional[str]):
    if not (v_path or z_path):
        return
    if inputs.baseline:
        console.print("⚠️ No-RIS baseline has no phase matrix or beamformed data to write", style="yellow")
        return
    if v_path:
        console.print(f"📝 V written to {inputs.phases.to_csv(v_path)}", style="dim")
    if z_path:
        console.print(f"📝 Z written to {inputs.beamformed.to_csv(z_path)}", style="dim")


@app.command()
def spectrum(
    config_file: Optional[str] = typer.Option(None, "--config", "-c", help="Configuration file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    algorithm: Optional[Algorithm] = typer.Option(None, "--algorithm", "-a", help="NLMS variant"),
    m: Optional[str] = typer.Option(None, "--m", help="RIS elements (0 = no-RIS baseline)"),
    snr_db: Optional[float] = typer.Option(None, "--snr", help="SNR at the passive radar in dB"),
    per_epoch: bool = typer.Option(False, "--per-epoch", help="Emit the sequential spectrum after every epoch"),
    dump_v: Optional[str] = typer.Option(None, "--dump-v", help="Also write the RIS phase matrix V to this CSV"),
    dump_z: Optional[str] = typer.Option(None, "--dump-z", help="Also write the beamformed data Z to this CSV"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Output CSV file"),
):
    """Emit the normalized spectrum of one simulated campaign."""
    with _handle_errors():
        m_values = _parse_m(m)
        config = _load_config(config_file, seed, algorithm, out=out)
        scene = load_scene(config.scene_file) if config.scene_file else None
        if m_values:
            ris_size = m_values[0]
        else:
            ris_size = scene.m if scene is not None else config.m
        snr = config.spectrum_snr_db if snr_db is None else snr_db

        timer = RunTimer()
        timer.start()
        with timer.stage("simulate"):
            inputs = prepare_inputs(config, snr, (config.seed,), m=ris_size, scene=scene)
        _dump_inputs(inputs, dump_v, dump_z)

        with timer.stage("estimate"):
            if per_epoch:
                estimator = make_estimator(Algorithm.SEQUENTIAL, config.nlms, config.spacing)
                frames = []
                for epoch, running in enumerate(per_epoch_spectra(estimator, inputs)):
                    power = normalize_spectrum(running).p if running.p.max() > 0 else running.p
                    frames.append(pd.DataFrame({"epoch": epoch, "angle_deg": running.angles, "power": power}))
                frame = pd.concat(frames, ignore_index=True)
            else:
                estimator = make_estimator(config.algorithm, config.nlms, config.spacing)
                result = normalize_spectrum(estimator.spectrum(inputs.z, inputs.v))
                frame = result.to_frame()
                detection = estimator.detect(result)
                console.print(
                    f"🎯 {estimator.name} NLMS, M={ris_size}, {snr:g} dB: "
                    f"{detection.k_hat} target(s) at {detection.angles} (truth {inputs.truth})",
                    highlight=False,
                )
        timer.end()

        _emit(frame, config.output_path)
        console.print(f"⏱️ {timer.get_total_duration():.2f} s", style="dim")


def _sweep(kind: SweepKind, config_file, seed, algorithm, m, trials, out):
    with _handle_errors():
        config = _load_config(config_file, seed, algorithm, _parse_m(m), trials, out)
        validation = config.validate_config()
        if validation["errors"]:
            for error in validation["errors"]:
                console.print(f"❌ {error}", style="red")
            raise typer.Exit(code=1)
        for warning in validation["warnings"]:
            console.print(f"⚠️ {warning}", style="yellow")

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TimeElapsedColumn(),
            console=console,
        ) as progress:
            task = progress.add_task(f"Running {kind.value} sweep...", total=None)
            table = run_sweep(config, kind, progress=lambda n: progress.advance(task, n))
            progress.update(task, description=f"✅ {kind.value} sweep completed!")

        _emit(table.to_frame(), config.output_path)


@app.command("sweep-snr")
def sweep_snr(
    config_file: Optional[str] = typer.Option(None, "--config", "-c", help="Configuration file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    algorithm: Optional[Algorithm] = typer.Option(None, "--algorithm", "-a", help="NLMS variant"),
    m: Optional[str] = typer.Option(None, "--m", help="Comma-separated RIS sizes, 0 = no-RIS baseline"),
    trials: Optional[int] = typer.Option(None, "--trials", "-t", help="Trials per point"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Output CSV file"),
):
    """Metrics against SNR."""
    _sweep(SweepKind.SNR, config_file, seed, algorithm, m, trials, out)


@app.command("sweep-targets")
def sweep_targets(
    config_file: Optional[str] = typer.Option(None, "--config", "-c", help="Configuration file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    algorithm: Optional[Algorithm] = typer.Option(None, "--algorithm", "-a", help="NLMS variant"),
    m: Optional[str] = typer.Option(None, "--m", help="Comma-separated RIS sizes, 0 = no-RIS baseline"),
    trials: Optional[int] = typer.Option(None, "--trials", "-t", help="Trials per point"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Output CSV file"),
):
    """Metrics against the number of targets."""
    _sweep(SweepKind.TARGETS, config_file, seed, algorithm, m, trials, out)


@app.command("sweep-separation")
def sweep_separation(
    config_file: Optional[str] = typer.Option(None, "--config", "-c", help="Configuration file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    algorithm: Optional[Algorithm] = typer.Option(None, "--algorithm", "-a", help="Ignored, both variants run"),
    m: Optional[str] = typer.Option(None, "--m", help="Comma-separated RIS sizes, 0 = no-RIS baseline"),
    trials: Optional[int] = typer.Option(None, "--trials", "-t", help="Trials per point"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Output CSV file"),
):
    """Metrics against the angular separation of two targets (batch and sequential)."""
    _sweep(SweepKind.SEPARATION, config_file, seed, algorithm, m, trials, out)


@app.command()
def selftest(seed: int = typer.Option(0, "--seed", help="Seed of the random checks")):
    """Run the built-in invariant checks."""
    setup_logging()
    results = run_selftest(seed)

    table = Table(title="Self-test")
    table.add_column("Check", style="cyan")
    table.add_column("Status")
    table.add_column("Details")
    for result in results:
        status = "[green]pass[/green]" if result.passed else "[red]FAIL[/red]"
        table.add_row(result.name, status, result.detail)
    console.print(table)

    failed = [r.name for r in results if not r.passed]
    if failed:
        console.print(f"❌ {len(failed)} check(s) failed", style="red")
        raise typer.Exit(code=1)
    console.print(f"✅ All {len(results)} checks passed", style="green")


@app.command()
def scene(
    out: str = typer.Argument(..., help="Scene file to write"),
    config_file: Optional[str] = typer.Option(None, "--config", "-c", help="Configuration file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    m: Optional[str] = typer.Option(None, "--m", help="RIS elements"),
):
    """Draw a random scene from the configuration and save it for reuse via ``scene_file``."""
    with _handle_errors():
        m_values = _parse_m(m)
        config = _load_config(config_file, seed)
        drawn = build_scene(config, (config.seed,), m_values[0] if m_values else config.m)
        save_scene(drawn, out)
        console.print(f"✅ Saved {drawn.k}-target scene to: {out}", style="green")


@app.command()
def config(
    create: bool = typer.Option(False, "--create", help="Create default configuration file"),
    file: Optional[str] = typer.Option(None, "--file", "-f", help="Configuration file path"),
    validate: bool = typer.Option(False, "--validate", help="Validate configuration"),
    show: bool = typer.Option(False, "--show", help="Show current configuration"),
):
    """Configuration management."""
    with _handle_errors():
        if create:
            config_path = file or "config.json"
            create_default_config_file(config_path)
            console.print(f"✅ Created default configuration: {config_path}", style="green")
            return

        if file:
            current = load_config_from_file(file)
            console.print(f"✅ Loaded configuration from: {file}", style="green")
        else:
            current = get_config()

        if validate:
            validation = current.validate_config()
            if validation["errors"]:
                console.print("❌ Configuration errors:", style="red")
                for error in validation["errors"]:
                    console.print(f"  • {error}", style="red")
            else:
                console.print("✅ Configuration is valid", style="green")

            if validation["warnings"]:
                console.print("⚠️ Configuration warnings:", style="yellow")
                for warning in validation["warnings"]:
                    console.print(f"  • {warning}", style="yellow")

            if validation["errors"]:
                raise typer.Exit(code=1)

        if show:
            console.print("📋 Current Configuration:", style="bold")
            console.print(JSON.from_data(current.model_dump(mode="json")))


if __name__ == "__main__":
    app()
