"""Exception and warning types shared across the package."""


class EsspathError(Exception):
    """Base class for errors raised by esspath."""


class InputError(EsspathError, ValueError):
    """Malformed or invalid user input (bad graph file, unknown vertex, ...)."""


class NumericError(EsspathError, RuntimeError):
    """A numerical procedure failed to converge or lost integrity."""


class UnsupportedGraphError(EsspathError, RuntimeError):
    """The requested operation needs spectral data this graph does not have
    (spectral radius >= 2, so no Coxeter number)."""


class NonEssentialInputWarning(UserWarning):
    """A product was asked for on inputs that were not essential; they were
    projected onto the essential subspace first."""
