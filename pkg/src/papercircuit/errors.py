"""Exception hierarchy shared across the pipeline."""


class PaperCircuitError(Exception):
    """Base class for all library errors."""


class ParseError(PaperCircuitError):
    """Malformed input text (netlist XML, SVG, placement or library file).

    Carries line/column when the underlying parser reports them.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ValidationError(PaperCircuitError):
    """Structurally valid input violating a model invariant."""


class UnitError(ParseError):
    """SVG document whose units cannot be resolved to millimetres."""


class UnknownPart(PaperCircuitError):
    pass


class UnknownFootprint(PaperCircuitError):
    pass


class UnknownNetName(PaperCircuitError):
    pass


class BadRotation(PaperCircuitError):
    pass


class MissingPlacement(PaperCircuitError):
    def __init__(self, part_id):
        self.part_id = part_id
        super().__init__(f"part {part_id!r} has no placement")


class Infeasible(PaperCircuitError):
    """Parts cannot fit on the board even before optimization starts."""


class SeedConflict(PaperCircuitError):
    """Two different nets claim the same grid cell."""


class PadClearanceViolation(PaperCircuitError):
    """Different-net pads closer than the gap width; carving would eat a pad."""


class FeatureTooThin(PaperCircuitError):
    """Minimum-feature opening disconnected or removed a net's pad cells."""

    def __init__(self, net_id, message=None):
        self.net_id = net_id
        super().__init__(message or f"net {net_id} has features too thin to fabricate")


class NoSeeds(PaperCircuitError):
    """Partition requested on a grid with no seed cells."""


class ModeMismatch(PaperCircuitError):
    """Export called with options for a different mode."""


class TapeWidthMismatch(PaperCircuitError):
    """Fine-tape width differs from the board gap width."""
