"""Main entry point for algoprob when run as a module."""

from algoprob.cli import main

if __name__ == "__main__":
    main(prog_name="algoprob")
