"""GeoSSA Bench - seeded sparrow search optimizers and their evaluation harness."""

__version__ = "0.1.0"
