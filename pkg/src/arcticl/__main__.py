"""Allow running arcticl as `python -m arcticl`."""

from arcticl.cli import cli

if __name__ == "__main__":
    cli()
