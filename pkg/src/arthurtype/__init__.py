"""Exact combinatorics for good-parity representations of split odd
orthogonal and symplectic p-adic groups.

Everything is computed over exact half-integers; no floating point is used
anywhere.  The main entry points are:

- ``repdata``: segments, multisegments, Langlands data, A-parameters,
  component groups;
- ``jacquet``: Grothendieck-group symbol algebra, the maximal-parabolic
  Jacquet formula, rho-derivatives and sound vanishing tests;
- ``amseg``: extended multi-segments, their evaluation to Langlands data,
  and packet enumeration;
- ``decide``: Arthur-type decision procedures;
- ``unitary``: unitarity verdicts, including the slightly-beyond-good-parity
  criterion with a pluggable irreducibility oracle;
- ``cli``: the JSON batch front-end.
"""

from . import repdata, jacquet, amseg, decide, unitary, jsonio, cli  # noqa: F401

__version__ = "0.1.0"
