#!/usr/bin/env python3
"""
Initialize the results store and warm the class-number cache.

Usage:
    python scripts/initialize_db.py [max_p]
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import configure_logging
from src.database.connection import init_db
from src.database.store import ResultsStore
from src.classgroup.ranks import ClassData, class_numbers_minus_4p, primes_1_mod_4


def main(max_p: int = 100_000):
    """Create tables and cache h(-4p) for p = 1 mod 4 up to max_p."""

    print("🚀 Initializing Spin Symbols Lab results store\n")
    print("=" * 60)

    print("\n📦 Step 1: Creating database schema...")
    try:
        db_manager = init_db()
        print("✅ Database tables created")
    except Exception as e:
        print(f"❌ Failed to create database: {e}")
        return False

    print(f"\n🧮 Step 2: Class numbers h(-4p) for p <= {max_p:,}...")
    try:
        primes = primes_1_mod_4(max_p).tolist()
        numbers = class_numbers_minus_4p(primes)
        store = ResultsStore(db_manager)
        saved = store.save_class_data(ClassData(p=p, h=h) for p, h in numbers.items())
        print(f"✅ Cached {saved} primes")

        data = [ClassData(p=p, h=h) for p, h in numbers.items()]
        print(f"\n📊 Rank distribution:")
        for k in (2, 3, 4):
            share = sum(d.rank(k) for d in data) / len(data) if data else 0.0
            print(f"  {2 ** k:>2} | h:  {share:.4f}  (expected {2.0 ** (1 - k):.4f})")
    except Exception as e:
        print(f"❌ Failed to compute class numbers: {e}")
        return False

    print("\n" + "=" * 60)
    print("✅ Initialization complete!")
    print("\nNext steps:")
    print("  python scripts/run_experiment.py govern16 --preset governing_e --max-norm 1000000 --db")

    return True


if __name__ == '__main__':
    configure_logging()
    bound = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
    success = main(bound)
    sys.exit(0 if success else 1)
