"""Rational homology of spaces of long links modulo immersions.

The package builds the normalized cosimplicial complex obtained by
evaluating H^*(Conf(-, R^d); Q) on a simplicial model of a wedge of
spheres, and reads off Betti numbers in each total degree.
"""

__version__ = "0.1.0"
