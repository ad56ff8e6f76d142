"""Exception hierarchy.

Three rough tiers, which the CLI maps onto exit codes:

* input/validation problems (bad files, bad parameters, wrong dimension),
* numerical failures (defective matrices, unreachable step tolerances),
* structural facts about the map itself (not a channel at all).
"""


class MarkovscopeError(Exception):
    """Base class for everything raised on purpose by this package."""


# --- input / validation ---

class DimensionMismatch(MarkovscopeError):
    pass


class NotASquareOfSquare(MarkovscopeError):
    """Matrix size is not d*d for an integer d."""


class UnsupportedBasis(MarkovscopeError):
    pass


class RangeError(MarkovscopeError):
    """Parameter outside its documented range."""


class NotQubit(MarkovscopeError):
    pass


class InvalidForm(MarkovscopeError):
    """Lindblad-form data violates H = H^dag or G >= 0."""


class BranchLengthMismatch(MarkovscopeError):
    pass


class ParseError(MarkovscopeError):
    """Channel / generator file could not be parsed."""


# --- numerical failures ---

class DefectiveMatrix(MarkovscopeError):
    """Geometric multiplicity below algebraic: no clean spectral projectors."""


class UnpairedComplexEigenvalue(MarkovscopeError):
    """Complex eigenvalue without a matching conjugate partner."""


class StepFailure(MarkovscopeError):
    """Adaptive time-ordered integration could not reach its tolerance."""


class NonRealDeterminant(MarkovscopeError):
    """det(T) has an imaginary residue beyond tolerance; input is not
    Hermiticity preserving."""


class ComplexLorentzSpectrum(MarkovscopeError):
    """Eigenvalues of T g T g are genuinely complex (or negative) while
    det T > 0; the qubit divisibility criterion is undefined there."""


class DegenerateSample(MarkovscopeError):
    """Random-channel draw produced an unusable marginal even after retries."""


# --- structural facts about the map ---

class NotAChannel(MarkovscopeError):
    """Input fails the CPTP checks beyond tolerance."""


class SingularChannel(MarkovscopeError):
    """Zero eigenvalue: the channel has no logarithm at all."""


class NegativeRealEigenvalue(MarkovscopeError):
    """A non-degenerate negative real eigenvalue: no Hermiticity-compatible
    logarithm exists."""


class NotHermiticityPreserving(MarkovscopeError):
    pass


class NotAGenerator(MarkovscopeError):
    """Matrix fails the Lindblad-generator checks."""
