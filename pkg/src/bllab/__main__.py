"""Module entry point: python -m bllab."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
