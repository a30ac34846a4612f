"""Command-line surface (``python Atlas.py <subcommand> ...``)."""
