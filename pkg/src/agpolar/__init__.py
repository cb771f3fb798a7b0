"""Polar-code kernels from evaluation codes on pointed algebraic curves.

Submodules: galois (finite fields), curve (pointed curves and
semigroups), kernel (l x l kernels, exponents, shortening, Kronecker),
channel (DMCs, symmetry, degradation, exact splits), polarization
(G_n transform, Monte Carlo Z, SC decoding, degradation order),
codeset (monomial index sets, duals, distance bounds), cli.
"""

__version__ = "0.1.0"
