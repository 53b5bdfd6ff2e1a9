"""Export cli to __main__ for use like python -m dapsim."""
from dapsim.cli.commands import cli

if __name__ == "__main__":
    cli()
