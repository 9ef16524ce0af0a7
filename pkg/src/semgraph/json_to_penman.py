"""Shim: ``python -m semgraph.json_to_penman -i IN [-o OUT]``."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main(["json-to-penman", *sys.argv[1:]]))
