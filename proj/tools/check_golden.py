#!/usr/bin/env python3
"""Regenerates the golden outputs with the reference script into a temp dir
and verifies they match what is committed under data/golden/."""
import filecmp
import os
import subprocess
import sys
import tempfile

ARTIFACTS = ["matched.jsonl", "classification.jsonl", "indicators.csv",
             "plot_data.json", "manifest.json"]


def main():
    root = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..")
    config = os.path.join(root, "data", "synthetic", "config.json")
    golden = os.path.join(root, "data", "golden")
    with tempfile.TemporaryDirectory(prefix="fundscape_golden_") as tmp:
        subprocess.run([sys.executable, os.path.join(root, "tools", "reference_pipeline.py"),
                        config, tmp], check=True)
        bad = [a for a in ARTIFACTS
               if not filecmp.cmp(os.path.join(tmp, a), os.path.join(golden, a), shallow=False)]
    if bad:
        print("committed golden files are stale:", ", ".join(bad))
        return 1
    print("golden files match the reference script output")
    return 0


if __name__ == "__main__":
    sys.exit(main())
