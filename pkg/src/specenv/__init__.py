"""Window functions, Fourier-side norm bounds and spectrum envelopes for A - V.

A = -i d/dt on L2(R) and (Vx)(t) = v(t) x(-t) is a reflection perturbation.  The
package discretizes the operators on uniform grids, builds an explicit similarity
A - V ~ A - B with B Hilbert-Schmidt, and turns B into an envelope f with the
spectrum inside {|Im z| <= f(Re z)}.  Finite diagonal representations give an
exact model for the spectral mapping statements of the functional calculus.
"""

from .errors import (ConfigurationError, DomainError, NumericalFailure, PrecisionError,
                     ProximityError, SingularityError, SpecenvError)
from .fourier import (Grid, GridFunction, FreqGridFunction, Indicator, dft_forward, dft_inverse,
                      indicator, make_grid, norm_l1, norm_l2, norm_inf)
from .special import sine_integral

__version__ = "0.1.0"
