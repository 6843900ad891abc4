import sys

from src.cli import KnotObsCLI

if __name__ == "__main__":
    cli = KnotObsCLI()
    sys.exit(cli.main())
