"""Layout and bin arithmetic, checked against a brute-force interval oracle."""
from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from presstype.layout import (
    BACKSPACE,
    DEFAULT_CHARACTERS,
    SPACE,
    LayoutConfig,
    bin_center,
    bin_index,
    linear_layout,
    render_text,
)


def brute_force_bin(p: float, n: int) -> int:
    """Scan every interval [i/n, (i+1)/n) (last closed) with exact arithmetic."""
    num, den = float(p).as_integer_ratio()
    for i in range(n):
        lo_ok = i * den <= num * n
        hi_ok = num * n < (i + 1) * den or (i == n - 1 and num * n <= (i + 1) * den)
        if lo_ok and hi_ok:
            return i
    raise AssertionError(f"no interval owns {p!r}")


class TestLayoutConfig:
    def test_default_is_alphabet_space_backspace(self):
        lay = LayoutConfig()
        assert lay.n == 28
        assert lay.characters[0] == "A"
        assert lay.characters[25] == "Z"
        assert lay.characters[26] == SPACE
        assert lay.characters[27] == BACKSPACE

    def test_bin_width_times_n_is_exactly_one(self):
        for n in (2, 5, 28, 53):
            lay = linear_layout(n)
            assert lay.bin_width * lay.n == 1
            assert lay.bin_width == Fraction(1, n)

    def test_rejects_tiny_duplicate_and_misplaced_backspace(self):
        with pytest.raises(ValueError):
            LayoutConfig(("BS",))
        with pytest.raises(ValueError):
            LayoutConfig(("A", "A", "BS"))
        with pytest.raises(ValueError):
            LayoutConfig(("BS", "A"))

    def test_index_of_unknown_symbol(self):
        with pytest.raises(ValueError):
            LayoutConfig().index_of("?")


class TestBinIndex:
    def test_lowest_pressure_is_first_character(self):
        assert bin_index(0.0, LayoutConfig()) == 0

    def test_top_bin_is_closed(self):
        assert bin_index(1.0, LayoutConfig()) == 27

    def test_midpoint(self):
        # brute-force scan of all 28 intervals confirms 0.5 in [14/28, 15/28)
        assert brute_force_bin(0.5, 28) == 14
        assert bin_index(0.5, LayoutConfig()) == 14

    def test_out_of_range_rejected(self):
        lay = LayoutConfig()
        with pytest.raises(ValueError):
            bin_index(-0.001, lay)
        with pytest.raises(ValueError):
            bin_index(1.001, lay)

    def test_partition_against_brute_force_oracle(self):
        # dense grid: exactly one owning interval, and bin_index agrees
        for n in (2, 5, 28):
            lay = linear_layout(n)
            for k in range(0, 100001, 7):
                p = k / 100000
                assert bin_index(p, lay) == brute_force_bin(p, n)

    def test_exact_boundaries_belong_to_upper_bin(self):
        lay = linear_layout(4)
        assert bin_index(0.25, lay) == 1
        assert bin_index(0.5, lay) == 2
        assert bin_index(0.75, lay) == 3

    @given(
        st.integers(min_value=2, max_value=64),
        st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
        st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
    )
    def test_monotone_in_pressure(self, n, p1, p2):
        lay = linear_layout(n)
        if p1 > p2:
            p1, p2 = p2, p1
        assert bin_index(p1, lay) <= bin_index(p2, lay)


class TestBinCenter:
    def test_first_and_last_center(self):
        lay = LayoutConfig()
        assert bin_center(0, lay) == pytest.approx(1 / 56, abs=1e-15)
        assert bin_center(27, lay) == pytest.approx(55 / 56, abs=1e-15)

    def test_centers_symmetric_about_midpoint(self):
        lay = LayoutConfig()
        assert bin_center(13, lay) + bin_center(14, lay) == pytest.approx(1.0, abs=1e-15)

    def test_center_containment(self):
        for n in (2, 5, 28, 53):
            lay = linear_layout(n)
            for i in range(n):
                assert bin_index(bin_center(i, lay), lay) == i

    def test_out_of_range_rejected(self):
        lay = LayoutConfig()
        with pytest.raises(ValueError):
            bin_center(-1, lay)
        with pytest.raises(ValueError):
            bin_center(28, lay)


def test_linear_layout_sizes():
    assert linear_layout(28).characters == DEFAULT_CHARACTERS
    assert linear_layout(2).characters == ("A", "BS")
    lay = linear_layout(53)
    assert lay.n == 53
    assert lay.characters[-1] == BACKSPACE


def test_render_text():
    assert render_text(["H", "I", SPACE, "A"]) == "HI A"
    assert render_text([]) == ""
