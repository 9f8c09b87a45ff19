"""Unit tests for seeded random streams."""

import numpy as np
import pytest

from src.rng.streams import (
    REFERENCE_FILE,
    InvalidDimensionError,
    RngStream,
    derive_stream_id,
    rademacher_vector,
    reference_draws,
    standard_normal,
    stream_for_run,
    uniform01,
    verify_reference,
    write_reference,
)


@pytest.fixture
def stream():
    """Root stream for seed 42."""
    return RngStream(42)


class TestRngStream:
    """Tests for RngStream construction and draws."""

    def test_root_stream_matches_default_rng(self, stream):
        """Stream id 0 reproduces numpy.random.default_rng(seed)."""
        expected = np.random.default_rng(42).random(5)
        actual = [stream.uniform01() for _ in range(5)]
        np.testing.assert_array_equal(actual, expected)

    def test_first_two_draws_differ(self, stream):
        """Consecutive uniform draws are not degenerate."""
        assert uniform01(stream) != uniform01(stream)

    def test_uniform_range_and_mean(self, stream):
        """Uniform draws lie in [0, 1) and average 0.5."""
        draws = np.array([uniform01(stream) for _ in range(100_000)])
        assert np.all(draws >= 0.0)
        assert np.all(draws < 1.0)
        assert abs(draws.mean() - 0.5) < 0.01

    def test_normal_moments(self, stream):
        """Standard normal draws have mean 0 and variance 1."""
        draws = np.array([standard_normal(stream) for _ in range(100_000)])
        assert abs(draws.mean()) < 0.02
        assert abs(draws.var() - 1.0) < 0.05

    def test_same_seed_same_sequence(self):
        """Two streams with the same (seed, id) replay the same draws."""
        a, b = RngStream(7, 123), RngStream(7, 123)
        assert [a.standard_normal() for _ in range(20)] == [b.standard_normal() for _ in range(20)]

    def test_distinct_stream_ids_diverge(self):
        """Different stream ids never share their first 100 draws, over 1000 seeds."""
        seeds = np.random.default_rng(2024).integers(0, 2**63, size=1000, dtype=np.uint64)
        for seed in seeds:
            first = RngStream(int(seed), 1).random(100)
            second = RngStream(int(seed), 2).random(100)
            root = RngStream(int(seed), 0).random(100)
            assert not np.array_equal(first, second), seed
            assert not np.array_equal(first, root), seed

    @pytest.mark.parametrize("seed, stream_id", [(-1, 0), (2**64, 0), (0, -1), (0, 2**64)])
    def test_out_of_range_seed_rejected(self, seed, stream_id):
        """Seeds and stream ids must be unsigned 64-bit."""
        with pytest.raises(ValueError):
            RngStream(seed, stream_id)

    def test_spawn_is_deterministic_and_distinct(self, stream):
        """Spawned phase streams depend only on (seed, parent id, labels)."""
        child_a = stream.spawn("objective-noise")
        child_b = RngStream(42).spawn("objective-noise")
        assert child_a.stream_id == child_b.stream_id
        assert child_a.stream_id != stream.stream_id
        assert child_a.uniform01() == child_b.uniform01()

    def test_uniform_interval(self, stream):
        """uniform(low, high) stays within the interval."""
        values = stream.uniform(-1.0, 1.0, size=1000)
        assert values.min() >= -1.0
        assert values.max() < 1.0

    def test_choice_without_replacement(self, stream):
        """Index draws are distinct and within range."""
        picks = stream.choice_without_replacement(30, 6)
        assert len(set(picks.tolist())) == 6
        assert all(0 <= p < 30 for p in picks)


class TestRademacher:
    """Tests for +/-1 vectors."""

    def test_entries_are_signs(self, stream):
        """d=3 gives three entries in {-1, +1}."""
        vector = rademacher_vector(stream, 3)
        assert vector.shape == (3,)
        assert set(vector.tolist()) <= {-1.0, 1.0}

    def test_balanced(self, stream):
        """About half the single-entry draws are +1."""
        draws = [rademacher_vector(stream, 1)[0] for _ in range(10_000)]
        assert abs(np.mean(np.array(draws) == 1.0) - 0.5) < 0.02

    def test_deterministic(self):
        """Same stream state gives the same vector."""
        np.testing.assert_array_equal(
            RngStream(5).rademacher_vector(8), RngStream(5).rademacher_vector(8)
        )

    def test_zero_dimension_rejected(self, stream):
        """d=0 raises InvalidDimensionError."""
        with pytest.raises(InvalidDimensionError):
            rademacher_vector(stream, 0)


class TestStreamIds:
    """Tests for stream id derivation."""

    def test_derive_is_stable(self):
        """Same labels give the same id."""
        assert derive_stream_id("GeoSSA", "F1", 0) == derive_stream_id("GeoSSA", "F1", 0)

    def test_derive_fits_u64(self):
        """Ids are unsigned 64-bit."""
        value = derive_stream_id("SSA", "CB", 29)
        assert 0 <= value < 2**64

    def test_grid_ids_are_distinct(self):
        """Every cell of a realistic grid owns a distinct stream."""
        ids = {
            derive_stream_id(a, f"F{p}", r)
            for a in ("SSA", "GeoSSA", "GeoSSA1", "GeoSSA2", "GeoSSA3")
            for p in range(1, 24)
            for r in range(30)
        }
        assert len(ids) == 5 * 23 * 30

    def test_stream_for_run(self):
        """stream_for_run keys the stream by its labels."""
        s = stream_for_run(42, ("GeoSSA", "F1", 3))
        assert s.seed == 42
        assert s.stream_id == derive_stream_id("GeoSSA", "F1", 3)


class TestReferenceDraws:
    """Tests for the golden draw file."""

    def test_packaged_reference_matches(self):
        """The shipped reference file matches this platform's generator."""
        assert verify_reference(REFERENCE_FILE) == []

    def test_reference_table_shape(self):
        """Ten uniform and ten normal draws."""
        frame = reference_draws()
        assert list(frame.columns) == ["kind", "draw", "value"]
        assert (frame["kind"] == "uniform").sum() == 10
        assert (frame["kind"] == "normal").sum() == 10

    def test_write_then_verify(self, tmp_path):
        """A freshly written reference verifies cleanly."""
        path = write_reference(tmp_path / "ref.csv")
        assert verify_reference(path) == []

    def test_tampered_reference_reports_mismatch(self, tmp_path):
        """A changed value is reported with expected and actual."""
        path = write_reference(tmp_path / "ref.csv")
        text = path.read_text().splitlines()
        kind, draw, _ = text[1].split(",")
        text[1] = f"{kind},{draw},0.5"
        path.write_text("\n".join(text) + "\n")

        mismatches = verify_reference(path)
        assert len(mismatches) == 1
        assert mismatches[0]["kind"] == "uniform"
        assert mismatches[0]["draw"] == 0
        assert mismatches[0]["expected"] == 0.5
