"""
Description: This module defines the rendering properties of StreamTable drawings.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from pyStreamTable.errors import InvalidParameter, NonPositiveParameter
from pyStreamTable.settings import DEFAULT_PALETTE, DEFAULT_SCALE, SMOOTHING_RADIUS
from pyStreamTable.table import to_fraction


class Colour:
    def __init__(self, r: float, g: float, b: float, a: float = 1.0) -> None:
        """
        Initialize a new Colour instance.

        Parameters:
        - r (float): Red component, range 0.0 to 1.0
        - g (float): Green component, range 0.0 to 1.0
        - b (float): Blue component, range 0.0 to 1.0
        - a (float): Alpha (opacity) component, range 0.0 to 1.0
        """
        self._r = min(max(r, .0), 1.)
        self._g = min(max(g, .0), 1.)
        self._b = min(max(b, .0), 1.)
        self._a = min(max(a, .0), 1.)

    @classmethod
    def from_hex(cls, hex_string: str) -> 'Colour':
        """
        Create a Colour from '#RRGGBB' or '#RRGGBBAA', with or without the leading '#'.

        Raises:
        - InvalidParameter: If the hex_string is not in the correct format.
        """
        hex_string = hex_string.strip().lstrip("#")
        if len(hex_string) not in (6, 8):
            raise InvalidParameter("colour", hex_string, "must be 6 or 8 hexadecimal characters")
        try:
            r, g, b = (int(hex_string[i:i + 2], 16) / 255 for i in (0, 2, 4))
            a = int(hex_string[6:8], 16) / 255 if len(hex_string) == 8 else 1.0
        except ValueError:
            raise InvalidParameter("colour", hex_string, "is not hexadecimal") from None
        return cls(r, g, b, a)

    @property
    def opacity(self) -> float:
        return self._a

    def svg(self) -> str:
        """The colour as an SVG '#rrggbb' string; opacity is written separately."""
        return "#" + "".join(f"{round(255 * c):02x}" for c in (self._r, self._g, self._b))

    def __eq__(self, other) -> bool:
        return isinstance(other, Colour) and (self.svg(), self._a) == (other.svg(), other._a)

    def __str__(self):
        return self.svg()

    def __repr__(self):
        return f"Colour.from_hex('{self.svg()}')"


@dataclass(frozen=True)
class RenderOptions:
    """
    Attributes:
        scale (float): Pixels per layout unit.
        palette (tuple): Stream colours, cycled by column.
        smoothing (Optional[Fraction]): Corner radius as a fraction of the smallest row
                                        height, in [0, 1/2]; None draws sharp corners.
        show_grid (bool): Draw the row boundaries as dotted lines.
        labels (bool): Write row and column labels.
    """
    scale: float = DEFAULT_SCALE
    palette: Tuple[Colour, ...] = field(default_factory=lambda: tuple(Colour.from_hex(c) for c in DEFAULT_PALETTE))
    smoothing: Optional[Fraction] = SMOOTHING_RADIUS
    show_grid: bool = True
    labels: bool = True

    def __post_init__(self):
        if not self.scale > 0:
            raise NonPositiveParameter("scale", self.scale)
        if not self.palette:
            raise InvalidParameter("palette", self.palette, "needs at least one colour")
        palette = tuple(c if isinstance(c, Colour) else Colour.from_hex(c) for c in self.palette)
        object.__setattr__(self, "palette", palette)
        if self.smoothing is not None:
            radius = to_fraction(self.smoothing)
            if not 0 <= radius <= Fraction(1, 2):
                raise InvalidParameter("smoothing", radius, "must lie in [0, 1/2]")
            object.__setattr__(self, "smoothing", radius)

    def colour(self, col: int) -> Colour:
        return self.palette[col % len(self.palette)]
