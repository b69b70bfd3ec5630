"""ringlab: a verifiable numerics toolkit for deterministic ringdown inference.

Library layout:

* ``signal_model``    damped-exponential scenes, taper weights, weighted calculus
* ``analytic_window`` pseudopole interpolation windows and their application
* ``extractor``       shift Rayleigh-quotient frequency extraction with certified bounds
* ``prony2``          four-sample two-exponential recovery and its conditioning
* ``merotoy``         rational resolvent laboratory: residues, contours, pseudospectra
* ``paramap``         synthetic pseudopole lattice, data-map inversion, bias bounds
* ``pipeline``        configuration-driven end-to-end runs and sweeps (CLI: ``ringlab``)
"""

from . import (  # noqa: F401
    analytic_window,
    errors,
    extractor,
    merotoy,
    paramap,
    prony2,
    signal_model,
)

__version__ = "0.1.0"
