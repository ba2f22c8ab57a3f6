#!/usr/bin/env python3
"""CLI entry point for the GNS entropy toolkit"""

import sys
from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
