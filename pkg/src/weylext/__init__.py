"""Weyl quantisation, metaplectic operators and symplectic dimensional extensions on grids.

Conventions: hbar = 1, phase coordinates ordered ``(x, y; xi, eta)``,
``J = [[0, I], [-I, 0]]``, grid nodes ``-L + i dx`` flattened in C order.
"""
from ._version import __version__
from .errors import (ConfigError, ContractError, ConventionError, DegenerateError,
                     DimensionError, DomainError, NotFreeError, PreconditionError,
                     ShapeError, UnsupportedError, WeylExtError)
from .extension import (Extension, ExtensionSpec, bopp_spec, extend_operator,
                        extend_operator_tensor, extend_symbol, identity_spec, landau_spec,
                        matched_grid, weak_form_eval)
from .grid import (Grid, OperatorMatrix, StateVector, dft, eigh, hermite_oracle, idft,
                   interpolate, norm, weighted_inner)
from .intertwine import (bopp_intertwiner_closed, build_intertwiner, gram_check, kernel_probe,
                         landau_intertwiner_closed, nonhypoellipticity_witness,
                         transfer_eigenpairs)
from .metaplectic import build_metaplectic, inverse_metaplectic, unitarity_defect
from .shubin import classify, derivative_ratio, growth_envelope
from .spectral import cluster_eigenvalues, spectrum_report
from .symbols import (FunctionSymbol, GaussianSymbol, QuadraticSymbol, Symbol,
                      harmonic_oscillator, parse_symbol)
from .symplectic import (J, QuadraticFormW, SymplecticMatrix, bopp_matrix, is_symplectic,
                         landau_matrix, random_free_symplectic, symplectic_from_w, w_dual,
                         w_from_symplectic)
from .weyl import SampledSymbol, dequantize, quantize, quantize_quadratic, sample_symbol
from .wigner import (bopp_operator, bopp_symbol, cross_wigner, moyal_star,
                     moyal_star_quadrature, wigner_operator)

__all__ = [name for name in dir() if not name.startswith("_")]
