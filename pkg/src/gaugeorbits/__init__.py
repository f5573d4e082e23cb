"""Gauge orbit types of lattice connections over compact structure groups.

Modules:
  groups       cataloged compact groups, centralizers, generator reduction
  howe         Howe subgroup conjugacy classes and the type poset
  paths        combinatorial graphs and reduced edge words
  connections  lattice connections, holonomy, gauge action, orbit types
  construct    type-magnifying extensions and arbitrary-type realization
  census       exact and Monte Carlo stratum measures, stratification checks
  slicelab     equivariant retraction onto conjugation orbits and slice checks
  cli          command-line entry point
"""

__version__ = "0.1.0"
