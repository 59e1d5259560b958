"""Command-line interface for Dowkernet."""
