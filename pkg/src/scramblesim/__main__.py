"""
Allow running scramblesim as a module: python -m scramblesim
"""

import sys

from scramblesim.cli import main

if __name__ == "__main__":
    sys.exit(main())
