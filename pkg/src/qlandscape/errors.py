"""Shared exception types."""


class OutOfRegimeError(Exception):
    """An operation was invoked outside its mathematical regime.

    Raised for violated preconditions: non-planar vectors handed to a
    planar-only construction, saddle probing outside the saddle domains,
    controls that do not span the problem horizon, degenerate operators,
    and similar cases where the requested quantity is undefined.
    """
