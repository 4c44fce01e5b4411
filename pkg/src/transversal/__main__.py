#!/usr/bin/env python
"""
transversal entry point.

Run with: python -m transversal
"""

from transversal.cli import main

if __name__ == "__main__":
    main()
