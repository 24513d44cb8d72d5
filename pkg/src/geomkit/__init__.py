"""Geometry and point-cloud processing toolkit.

Submodules: :mod:`core` (primitives), :mod:`transform` (rigid transforms and
pose trees), :mod:`segmentation`, :mod:`vectorization`, :mod:`export`
(LaTeX output), :mod:`meta` (capability registry) and :mod:`cli`.
"""
__version__ = "0.1.0"
