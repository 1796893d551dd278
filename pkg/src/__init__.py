"""MultiDilworth package."""
