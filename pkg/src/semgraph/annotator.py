"""Shim: ``python -m semgraph.annotator -a ID [-s SCHEME] [-r DIR]``."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main(["annotate", *sys.argv[1:]]))
