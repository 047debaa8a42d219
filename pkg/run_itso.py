# -*- coding: utf-8 -*-
"""
ITSO Launcher
Run from a source checkout: python run_itso.py <command> [flags]
"""
import os
import sys

# Add the repository root to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from itso.cli import main

if __name__ == '__main__':
    sys.exit(main())
