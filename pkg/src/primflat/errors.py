"""Shared exception types."""


class InternalInvariantError(Exception):
    """A condition the underlying mathematics forbids was observed.

    Raised e.g. when a Lefschetz fiber system is singular, when the two
    evaluations of the twisted differential disagree, or when a cone element
    fails its mandatory divisibility shape.  Any occurrence is a bug, never
    a user error.
    """
