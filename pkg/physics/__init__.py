"""
Mesh and constitutive physics module
"""
from .mesh import CartesianMesh, RockField, build_mesh

__all__ = ['CartesianMesh', 'RockField', 'build_mesh']
