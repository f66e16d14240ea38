"""Entry point for the meta-termination command line."""
import sys
from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
