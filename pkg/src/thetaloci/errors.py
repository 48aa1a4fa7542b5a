"""Exception hierarchy.

Validation errors (bad input shape, wrong parity, ...) derive from
:class:`ValidationError`; failures of a numerical procedure on otherwise
valid input derive from :class:`NumericalError`.  The CLI maps the two
families to different exit codes.
"""


class ThetaLociError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def details(self):
        return {}


class ValidationError(ThetaLociError, ValueError):
    code = "validation"


class NumericalError(ThetaLociError, ArithmeticError):
    code = "numerical"


class NotSquare(ValidationError):
    code = "not_square"


class NotSymmetric(ValidationError):
    code = "not_symmetric"

    def __init__(self, asymmetry):
        super().__init__(f"matrix is not symmetric (max |t_ij - t_ji| = {asymmetry:.3e})")
        self.asymmetry = float(asymmetry)

    def details(self):
        return {"asymmetry": self.asymmetry}


class NotPositiveDefinite(ValidationError):
    code = "not_positive_definite"

    def __init__(self, eigenvalue):
        super().__init__(f"imaginary part is not positive definite (min eigenvalue {eigenvalue:.6g})")
        self.eigenvalue = float(eigenvalue)

    def details(self):
        return {"eigenvalue": self.eigenvalue}


class NotSymplectic(ValidationError):
    code = "not_symplectic"


class DimensionMismatch(ValidationError):
    code = "dimension_mismatch"


class BadArity(ValidationError):
    code = "bad_arity"

    def __init__(self, expected, got):
        super().__init__(f"expected {expected} characteristics, got {got}")
        self.expected = expected
        self.got = got

    def details(self):
        return {"expected": self.expected, "got": self.got}


class NotOdd(ValidationError):
    code = "not_odd"


class NotEven(ValidationError):
    code = "not_even"


class SingularFactor(NumericalError):
    code = "singular_factor"


class ToleranceUnreachable(NumericalError):
    code = "tolerance_unreachable"

    def __init__(self, radius_cap, tail_bound):
        super().__init__(
            f"truncation radius would exceed cap {radius_cap} "
            f"(tail bound at cap {tail_bound:.3e}); Im(tau) is nearly degenerate"
        )
        self.radius_cap = radius_cap
        self.tail_bound = float(tail_bound)

    def details(self):
        return {"radius_cap": self.radius_cap, "tail_bound_at_cap": self.tail_bound}


class BaseNotThetaNull(ValidationError):
    code = "base_not_theta_null"


class NoRootFound(NumericalError):
    code = "no_root_found"


class NotOnTsing(ValidationError):
    code = "not_on_tsing"


class NotOnY(ValidationError):
    code = "not_on_y"
