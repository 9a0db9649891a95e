"""Exact computation engine for graded basic algebras, quasi-hereditary
structure, Koszulity tests and affine Weyl / Kazhdan-Lusztig layer
predictions, cross-validated on small instances.
"""

__version__ = "0.1.0"
