"""Entry point for ``python -m dowkernet``."""
import sys

from dowkernet.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
