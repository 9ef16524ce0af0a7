"""Shim: ``python -m semgraph.penman_to_json -i IN [-o OUT]``."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main(["penman-to-json", *sys.argv[1:]]))
