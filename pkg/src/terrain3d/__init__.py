"""Terrain modeling toolkit: DEM tiles to colored 3D surface renders."""

from .grid import (DEFAULT_NODATA, METERS_PER_DEGREE, METERS_PER_FOOT,
                   ElevationGrid, GeoBounds, GridStats,
                   feet_to_meters, meters_to_feet, node_position, stats)
from .errors import (AdjacencyError, ChecksumError, EmptyMeshError,
                     FormatError, LayoutError, RangeError, SeamError,
                     ShapeError, TerrainError, UnsupportedShapeType)
from .asciigrid import read_asciigrid, write_asciigrid
from .dted import decode_sign_magnitude, read_dted, write_dted
from .shapefile import (Polygon, Ring, point_in_polygon, read_shp,
                        ring_signed_area)
from .mosaic import (EdgePolicy, TileLayout, arrange_tiles, horzcat, mosaic4,
                     mosaic_tiles, vertcat)
from .crop import crop_to_polygon, mask
from .surface import (ColorRamp, ParametricSurface, RampKind, ShadingMode,
                      TriangleMesh, build_surface, colorize, hsv_to_rgb,
                      normalize_z, ramp_color, triangulate)
from .plyio import export_ply, read_ply
from .render import (Camera, Image, project, rasterize, render_surface,
                     view_direction, write_png)

__version__ = "0.1.0"
