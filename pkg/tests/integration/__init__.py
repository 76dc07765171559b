"""Integration tests for ssb-sectors."""
