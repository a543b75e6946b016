#!/usr/bin/env python3
"""
Run a spin-symbol experiment.

Usage:
    python scripts/run_experiment.py density --preset cubic9 --max-norm 1000000 --set-S 1
    python scripts/run_experiment.py validate --preset governing_e --reciprocity-pairs 2000
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.main import main


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
