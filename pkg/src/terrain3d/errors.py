"""Exception hierarchy shared by all terrain3d modules."""


class TerrainError(Exception):
    """Base class for all terrain3d errors."""


class FormatError(TerrainError):
    """Input bytes/text do not conform to the expected file format."""


class ChecksumError(FormatError):
    """A record checksum did not verify."""

    def __init__(self, record_index, expected, actual):
        self.record_index = record_index
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"checksum mismatch in record {record_index}: "
            f"expected {expected:#010x}, got {actual:#010x}"
        )


class RangeError(TerrainError):
    """A value falls outside the representable range of a format."""


class UnsupportedShapeType(FormatError):
    """Shapefile contains a shape type this reader does not handle."""


class ShapeError(TerrainError):
    """Grid dimensions are incompatible for the requested operation."""


class AdjacencyError(TerrainError):
    """Tile bounds are not adjacent along the concatenation axis."""


class SeamError(TerrainError):
    """Shared-edge values disagree under the strict edge policy."""


class LayoutError(TerrainError):
    """Tiles cannot be arranged into a dense rectangular layout."""


class EmptyMeshError(TerrainError):
    """Triangulation produced no valid patches."""
