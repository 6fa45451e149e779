#!/usr/bin/env python3
"""
Launcher for the gcn-lab command line without installing the package

    python run.py train --data data/cora --preset GCN --seed 0
"""

import os
import subprocess
import sys
from pathlib import Path


def main():
    script_dir = Path(__file__).parent.absolute()
    cmd = [sys.executable, "-m", "gcn_lab.cli", *sys.argv[1:]]

    env = os.environ.copy()
    env["PYTHONPATH"] = os.pathsep.join(filter(None, [str(script_dir), env.get("PYTHONPATH")]))

    try:
        return subprocess.run(cmd, env=env).returncode
    except KeyboardInterrupt:
        print("\nStopped by user", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
