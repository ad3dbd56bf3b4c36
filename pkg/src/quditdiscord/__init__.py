"""Measurement-induced geometric discord for bipartite qudits (d >= 3).

Submodules: ``lie_algebra`` (su(d) generators, structure tensors, adjoint
representation), ``states`` (coherence-vector two-qudit states and named
families), ``measurement`` (local projective measurements and disturbance),
``discord`` (exact values, lower bounds, minimizer), ``entanglement``
(PPT / realignment / reduction criteria), ``classify`` (qutrit sign-state
classification), ``cli`` (command-line front end).
"""

from . import classify, discord, entanglement, lie_algebra, measurement, states

__all__ = [
    "classify",
    "discord",
    "entanglement",
    "lie_algebra",
    "measurement",
    "states",
]

__version__ = "0.1.0"
