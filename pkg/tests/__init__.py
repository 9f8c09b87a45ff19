"""Test suite for GeoSSA Bench."""
