"""Exception hierarchy.  The CLI maps InputError to exit 2, NumericalError to exit 3."""


class RfrError(Exception):
    pass


class InputError(RfrError, ValueError):
    pass


class NumericalError(RfrError, ArithmeticError):
    pass


class CollateralMismatchError(InputError):
    """Discount curve tag differs from the swap's collateral tag."""


class MissingFixingError(InputError):
    def __init__(self, fixing_date):
        super().__init__(f"missing fixing for {fixing_date.isoformat()}")
        self.fixing_date = fixing_date


class UnsupportedCaseError(InputError):
    pass


class DegenerateSwapError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass
