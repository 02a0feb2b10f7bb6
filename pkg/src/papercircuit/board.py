"""Board parameters: physical extent, raster resolution and fabrication rules."""

from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class Board:
    """Rectangular board with the rule set the whole pipeline shares.

    width/height/margin in mm.  ``resolution`` is the raster cell size,
    ``gap`` the carved isolation channel width and ``min_feature`` the
    narrowest zone feature that survives weeding.
    """

    width: float = 100.0
    height: float = 70.0
    margin: float = 2.0
    resolution: float = 0.2
    gap: float = 1.0
    min_feature: float = 2.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValidationError("board width/height must be positive")
        if self.resolution <= 0:
            raise ValidationError("resolution must be positive")
        if self.margin < 0:
            raise ValidationError("margin must be >= 0")
        if self.gap < 2 * self.resolution:
            raise ValidationError(
                f"gap {self.gap} must be >= 2*resolution ({2 * self.resolution})"
            )
        if self.min_feature < self.gap:
            raise ValidationError(
                f"min_feature {self.min_feature} must be >= gap {self.gap}"
            )
        if 2 * self.margin >= min(self.width, self.height):
            raise ValidationError("margin too large for board size")

    @property
    def nx(self):
        """Grid columns."""
        import math

        return math.ceil(self.width / self.resolution - 1e-9)

    @property
    def ny(self):
        """Grid rows."""
        import math

        return math.ceil(self.height / self.resolution - 1e-9)

    def cell_center(self, i, j):
        """Center of cell (i, j) in mm, i along x, j along y."""
        r = self.resolution
        return ((i + 0.5) * r, (j + 0.5) * r)

    def usable_rect(self):
        """(xmin, ymin, xmax, ymax) of the board minus margin."""
        return (
            self.margin,
            self.margin,
            self.width - self.margin,
            self.height - self.margin,
        )
