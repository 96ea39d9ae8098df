"""End-to-end parity with the command line interface.

The binding promises byte-for-byte the same 8-bit output as the CLI for
the same pixels, mask and configuration.  Checked by running every method
against every loss pattern on one fixture image, with the CLI invoked as
a subprocess on a PNG of the same data.
"""

import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

bridge = pytest.importorskip("fsmr_bridge")
import fsmr

SEED = 5
PATTERNS = ("block", "line", "rand")


def run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "fsmr.cli", *argv],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


def test_bridge_output_bit_equals_cli_output(texture64, tmp_path):
    src = tmp_path / "src.png"
    Image.fromarray(texture64).save(src)
    combos = [(p, m) for p in PATTERNS for m in fsmr.METHODS]
    failures = []
    for pattern, method in combos:
        corrupted, mask = bridge.bridge_corrupt(texture64, pattern, seed=SEED)
        out = tmp_path / f"{pattern}_{method}.png"
        run_cli("pipeline", str(src), str(out),
                "--method", method, "--pattern", pattern, "--seed", str(SEED))
        via_cli = np.asarray(Image.open(out))
        via_bridge = bridge.bridge_process(corrupted, mask, method, (224, 224))
        if not np.array_equal(via_bridge, via_cli):
            failures.append(f"{pattern}/{method}")
    ok = not failures
    print(f"[{'PASS' if ok else 'FAIL'}] bridge-cli-parity: "
          f"{len(combos) - len(failures)}/{len(combos)} method x pattern "
          "combinations bit-identical"
          + ("" if ok else f" (mismatch: {', '.join(failures)})"))
    assert ok


def test_parity_holds_with_shared_config_overrides(texture64, tmp_path):
    src = tmp_path / "src.png"
    Image.fromarray(texture64).save(src)
    out = tmp_path / "out.png"
    run_cli("pipeline", str(src), str(out),
            "--method", "fsmr", "--pattern", "rand", "--seed", str(SEED),
            "--set", "iterations=30", "--set", "window_decay=0.7",
            "--set", "target_width=96", "--set", "target_height=96")
    corrupted, mask = bridge.bridge_corrupt(texture64, "rand", seed=SEED)
    via_bridge = bridge.bridge_process(
        corrupted, mask, "fsmr", (96, 96),
        {"iterations": 30, "window_decay": 0.7})
    np.testing.assert_array_equal(via_bridge, np.asarray(Image.open(out)))
