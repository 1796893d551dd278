"""Subcommands for the MultiDilworth command line."""
