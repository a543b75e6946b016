#!/usr/bin/env python3
"""
Build, validate and export the shipped presets.

Each compact presentation under src/algebra/data is built with exact arithmetic,
validated, and written in the explicit JSON layout to the output directory.

Usage:
    python scripts/build_presets.py [output_dir]
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import configure_logging
from src.algebra.presets import load_preset, preset_names
from src.algebra.validation import validate_field_spec


def main(output_dir: Path):
    """Export every preset; False if any fails validation."""

    print("🔧 Building presets\n")
    output_dir.mkdir(parents=True, exist_ok=True)
    ok = True
    for name in preset_names():
        try:
            spec = load_preset(name)
            report = validate_field_spec(spec)
        except Exception as e:
            print(f"❌ {name}: {e}")
            ok = False
            continue
        status = '✅' if report.passed else '❌'
        print(f"{status} {spec.name}: degree {spec.degree}, D = {spec.discriminant}, "
              f"regulator {report.regulator:.6f}")
        for check, passed in report.checks.items():
            if not passed:
                print(f"    ❌ {check}")
        if report.passed:
            spec.save(output_dir / f"{spec.name}.explicit.json")
        ok = ok and report.passed

    return ok


if __name__ == '__main__':
    configure_logging()
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path('./output/presets')
    success = main(target)
    sys.exit(0 if success else 1)
