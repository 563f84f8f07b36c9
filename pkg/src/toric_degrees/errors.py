"""Shared exception types.

PreconditionError: a mathematical precondition of an operation is violated
(wrong dimension, non-ample divisor, real spectrum where a complex pair is
required, ...).  CLI maps these to exit code 3.

RefinementError: a certified numeric computation could not reach the
requested enclosure quality after the refinement schedule.  Reported, never
silently widened.  Also exit code 3.

SchemaError: malformed external input (JSON problem files, CLI arguments).
CLI maps these to exit code 2.
"""


class SchemaError(Exception):
    pass


class PreconditionError(Exception):
    pass


class RefinementError(PreconditionError):
    pass
