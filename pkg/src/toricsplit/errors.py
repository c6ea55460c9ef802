"""Exception hierarchy for toricsplit."""


class ToricSplitError(ValueError):
    """Base class for all data errors raised by this package."""


class FanError(ToricSplitError):
    """Invalid fan input (duplicate rays, non-pointed cones, ...)."""


class IncompleteFanError(ToricSplitError):
    """The fan is not verified complete and no override was given."""


class UnboundedPolytopeError(ToricSplitError):
    pass


class EmptyPolytopeError(ToricSplitError):
    pass


class EnumerationTooLarge(ToricSplitError):
    pass


class NotRegularError(ToricSplitError):
    """A term pi_a of a module map is not regular on the ambient variety."""


class NotDiagonallySplitError(ToricSplitError):
    pass
