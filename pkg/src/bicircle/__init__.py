"""Convex hulls of two circles in space: edge curves, order types,
face lattices, boundary meshes and dual bodies."""
