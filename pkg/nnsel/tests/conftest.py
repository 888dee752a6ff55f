"""Fixtures that obtain training data from the simulator CLI.

The simulator package is never imported: datasets and golden files are
produced by invoking its command-line interface in a subprocess, which is
the interface contract between the two packages.
"""

import os
import subprocess
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]
SIMULATOR_SRC = REPO_ROOT / "src"

# toy scenario shared by the parity and training tests
TOY = {"P": 50, "L": 4, "K": 5, "W": 4.0}


def run_simulator(args: list[str]) -> None:
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SIMULATOR_SRC) + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "famaport.cli", *args],
        capture_output=True,
        text=True,
        env=env,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"simulator CLI failed ({proc.returncode}): {proc.stderr}")


def export_dataset(path: Path, n: int, seed: int, snrs: str | None = None) -> Path:
    args = [
        "dataset", "--n", str(n), "--seed", str(seed),
        "--ports", str(TOY["P"]), "--active", str(TOY["L"]),
        "--users", str(TOY["K"]), "--aperture", str(TOY["W"]),
        "--out", str(path),
    ]
    if snrs:
        args += ["--snrs", snrs]
    run_simulator(args)
    return path


@pytest.fixture(scope="session")
def golden_file(tmp_path_factory) -> Path:
    """100 labeled records used for cross-component parity."""
    path = tmp_path_factory.mktemp("golden") / "golden.jsonl"
    return export_dataset(path, n=100, seed=900)


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory) -> Path:
    """A handful of records for fast data-contract tests."""
    path = tmp_path_factory.mktemp("small") / "small.jsonl"
    return export_dataset(path, n=10, seed=901)


@pytest.fixture(scope="session")
def smoke_dataset(tmp_path_factory) -> Path:
    """500 records for the phase-1 learning smoke test."""
    path = tmp_path_factory.mktemp("smoke") / "smoke.jsonl"
    return export_dataset(path, n=500, seed=902)


@pytest.fixture(scope="session")
def toy_train_val(tmp_path_factory) -> tuple[Path, Path]:
    """2000 training and 200 validation records for the training acceptance
    test."""
    root = tmp_path_factory.mktemp("toy")
    train = export_dataset(root / "train.jsonl", n=2000, seed=910)
    val = export_dataset(root / "val.jsonl", n=200, seed=911)
    return train, val
