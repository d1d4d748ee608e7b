"""
Run the sl2-tilting command line without installing the package.

    python run.py decide -p 2 -r 6 -s 3 --trace
"""

import sys
from pathlib import Path

# repository root, so that `src` resolves as a package
sys.path.insert(0, str(Path(__file__).parent))

from src.cli.main import run  # noqa: E402

if __name__ == "__main__":
    run()
