"""
Quick Start Entry Point for seqrec
Run from project root: python run.py <command> [options]
"""

from seqrec.main import cli

if __name__ == "__main__":
    cli()
