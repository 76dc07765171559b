"""Unit tests for ssb-sectors."""
