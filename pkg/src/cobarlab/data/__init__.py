"""Bundled example coalgebras and families."""
