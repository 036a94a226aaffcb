"""Linear character layout: equal pressure bins over the normalized [0, 1] range.

Symbol ``i`` owns the half-open interval [i/n, (i+1)/n); the last bin is
closed at 1.0 so the partition is total.  Backspace always sits at the
maximum-pressure end.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction

SPACE = "SP"
BACKSPACE = "BS"

DEFAULT_CHARACTERS: tuple[str, ...] = tuple(string.ascii_uppercase) + (SPACE, BACKSPACE)

# Pool used when building non-default layout sizes for sweeps.
_SYMBOL_POOL: tuple[str, ...] = (
    tuple(string.ascii_uppercase)
    + (SPACE,)
    + tuple(string.ascii_lowercase)
    + tuple(string.digits)
)


@dataclass(frozen=True)
class LayoutConfig:
    characters: tuple[str, ...] = DEFAULT_CHARACTERS

    def __post_init__(self) -> None:
        chars = tuple(self.characters)
        object.__setattr__(self, "characters", chars)
        if len(chars) < 2:
            raise ValueError("layout needs at least 2 characters")
        if len(set(chars)) != len(chars):
            raise ValueError("layout characters must be distinct")
        if chars[-1] != BACKSPACE:
            raise ValueError("backspace must occupy the last (maximum-pressure) index")

    @property
    def n(self) -> int:
        return len(self.characters)

    @property
    def bin_width(self) -> Fraction:
        # rational so that bin_width * n == 1 holds exactly
        return Fraction(1, self.n)

    def index_of(self, symbol: str) -> int:
        try:
            return self.characters.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} not in layout") from None


def linear_layout(n: int = 28) -> LayoutConfig:
    """Layout with ``n`` equal bins; default size reproduces A-Z, SP, BS."""
    if n == len(DEFAULT_CHARACTERS):
        return LayoutConfig()
    if n - 1 > len(_SYMBOL_POOL):
        raise ValueError(f"no symbol pool for a {n}-character layout")
    return LayoutConfig(_SYMBOL_POOL[: n - 1] + (BACKSPACE,))


def bin_index(p: float, layout: LayoutConfig) -> int:
    """Index of the bin owning normalized pressure ``p``.

    Computed as floor(p * n) in exact integer arithmetic (floats are
    rationals), so boundary samples always land on the side the partition
    assigns them to.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"normalized pressure {p!r} outside [0, 1]")
    num, den = float(p).as_integer_ratio()
    index = num * layout.n // den
    return layout.n - 1 if index == layout.n else index


def bin_center(index: int, layout: LayoutConfig) -> float:
    if not 0 <= index < layout.n:
        raise ValueError(f"bin index {index} outside [0, {layout.n})")
    return (index + 0.5) / layout.n


def render_text(symbols: list[str] | tuple[str, ...]) -> str:
    """Symbols -> display string; SP becomes a space, BS never reaches text."""
    return "".join(" " if s == SPACE else s for s in symbols)
