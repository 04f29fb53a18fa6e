class RspError(Exception):
    pass


class IndeterminateSum(RspError, ArithmeticError):
    """Raised on (+inf) + (-inf)."""


class ImproperPolicyError(RspError, ValueError):
    """An operation that requires a proper policy got an improper one."""


class NoProperPolicyError(RspError):
    pass


class AssumptionViolation(RspError):
    """A solver observed behaviour that its standing assumption rules out."""


class PolicyCapExceeded(RspError):
    pass


class UnfairSchedule(RspError, ValueError):
    pass
