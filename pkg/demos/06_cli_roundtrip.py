"""The command-line front end, driven in-process.

Writes a JSON run config, invokes the qfi and spectrum subcommands, and
reads the outputs back. Identical configs always give byte-identical
files, so results can be diffed across machines and runs.
"""

import json
import os
import tempfile

from latticeqfi.cli import main

config = {
    "model": "floquet",
    "initial_state": "fock",
    "method": "generator",
    "params": {"M": 3, "N": 3, "U": 1.92},
    "time_grid": {"start": 0.0, "stop": 90.0, "points": 180},
    "u_grid": {"start": 1.5, "stop": 2.3, "points": 17},
    "output_prefix": "demo",
}

with tempfile.TemporaryDirectory() as workdir:
    config_path = os.path.join(workdir, "config.json")
    with open(config_path, "w", encoding="utf-8") as handle:
        json.dump(config, handle, indent=2)
    print("config:", json.dumps(config))

    for command in ("qfi", "spectrum"):
        code = main([command, "--config", config_path, "--out", workdir, "--emit-plot"])
        print(f"\n$ latticeqfi {command} --config config.json  ->  exit {code}")
        assert code == 0

    with open(os.path.join(workdir, "demo_qfi_summary.json"), encoding="utf-8") as handle:
        summary = json.load(handle)
    print("qfi summary:", {k: summary["results"][k] for k in ("F_max", "tau")})

    with open(os.path.join(workdir, "demo_spectrum.csv"), encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    print("spectrum header lines:")
    for line in lines[:5]:
        print(" ", line)
    print(f"  ... {len(lines)} lines, gnuplot script: demo_spectrum.csv.gp")
