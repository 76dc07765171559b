"""Tests for ssb-sectors."""
