"""
Allows `python -m occnet <subcommand>`.
"""

import sys

from occnet.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
