#pragma once

#include "geomolt/surface/surface.hpp"

#include <vector>

namespace geomolt {

/// Surface made of flat convex triangles and parallelograms with the given 3D corners (listed
/// counterclockwise seen from outside). Vertices are named v0, v1, ...; edges by their vertex pair.
PiecewiseSurface flat_polyhedron(const std::string& name, const std::vector<Vec3>& positions,
                                 const std::vector<std::vector<int>>& faces, bool closed = true);

/// Unit cube [0, 1]^3: 8 vertices, 12 straight edges, 6 flat square faces.
PiecewiseSurface cube_surface();

/// Regular tetrahedron with corners (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
PiecewiseSurface tetrahedron_surface();

/// Unit sphere cut into 8 octant triangles; each face is charted by central projection of a flat triangle.
PiecewiseSurface sphere_octants();

/// Unit-radius cylinder of height `height` closed by two flat disks; all curvature sits on the two creases.
PiecewiseSurface capped_cylinder(double height = 2.0);

/// Two flat half-squares glued along the x-axis: the plane z = 0 (y < 0) and the plane z = y (y > 0).
PiecewiseSurface dihedral_surface();

/// Flat disk of radius 2 inside a flat annulus 2 < r < 3 (open surface, curved interior edges).
PiecewiseSurface disk_annulus();

/// Six flat equilateral triangles around one interior vertex (open surface).
PiecewiseSurface hexagon_fan();

}  // namespace geomolt
