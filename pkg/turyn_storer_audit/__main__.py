"""Allow ``python -m turyn_storer_audit``."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
