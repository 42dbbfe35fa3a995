#!/usr/bin/env python3
"""Figure rendering entry point: forwards to the plots package."""
import sys

from dsgeident_plots.render import main

if __name__ == "__main__":
    sys.exit(main())
