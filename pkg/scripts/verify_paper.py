"""Scorecard over the bundled corpus; same as ``toric-wci verify-paper``."""

import sys

from toric_wci.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify-paper", *sys.argv[1:]]))
