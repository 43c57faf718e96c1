"""Shared shorthand for building flags and hyperplanes in tests."""

from cycarr.arrangement import FlagPath, Hyperplane, intersect_hyperplane


def d(i, j, k, T):
    return Hyperplane.diag(i, j, k, T)


def z(i, j, k, T):
    return Hyperplane.point(i, j, k, T)


def o(i):
    return Hyperplane.zero(i)


def flag_from(spec, hyperplane_lists):
    """Build a flag whose r-th step adds the r-th list of hyperplanes."""
    F = FlagPath.trivial(spec)
    for hs in hyperplane_lists:
        L = F.deepest
        for H in hs:
            L = intersect_hyperplane(L, H)
        F = F.extend(L)
    return F


def cut(edge, *hyperplanes):
    """Intersect an edge with several hyperplanes."""
    for H in hyperplanes:
        edge = intersect_hyperplane(edge, H)
    return edge
