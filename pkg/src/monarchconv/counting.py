"""Instrumented floating-point operation counter.

Operators report their work here as multiply-accumulate (MAC) and
elementwise-multiply events, split by real/complex dtype.  Real FLOP
conversions: real MAC = 2, complex MAC = 8, real mult = 1, complex
mult = 6.
"""

from contextlib import contextmanager

REAL_MAC_FLOPS = 2
COMPLEX_MAC_FLOPS = 8
REAL_MULT_FLOPS = 1
COMPLEX_MULT_FLOPS = 6

_active = []


class FlopCounter:
    """Accumulates MAC/mult event counts while installed via count_flops()."""

    def __init__(self):
        self.real_macs = 0
        self.complex_macs = 0
        self.real_mults = 0
        self.complex_mults = 0

    def flops(self):
        """Total real FLOPs implied by the recorded events."""
        return (
            REAL_MAC_FLOPS * self.real_macs
            + COMPLEX_MAC_FLOPS * self.complex_macs
            + REAL_MULT_FLOPS * self.real_mults
            + COMPLEX_MULT_FLOPS * self.complex_mults
        )

    def __repr__(self):
        return (
            f"FlopCounter(real_macs={self.real_macs}, complex_macs={self.complex_macs}, "
            f"real_mults={self.real_mults}, complex_mults={self.complex_mults})"
        )


@contextmanager
def count_flops():
    """Context manager yielding a FlopCounter that records nested operator work."""
    counter = FlopCounter()
    _active.append(counter)
    try:
        yield counter
    finally:
        _active.remove(counter)


def add_macs(n, complex_field):
    if _active:
        for counter in _active:
            if complex_field:
                counter.complex_macs += n
            else:
                counter.real_macs += n


def add_mults(n, complex_field):
    if _active:
        for counter in _active:
            if complex_field:
                counter.complex_mults += n
            else:
                counter.real_mults += n
