"""
Analysis Modules for ITSO runs
Provides convergence-history metrics and distribution snapshots
"""

__version__ = "1.0.0"
