"""Shock formation in the quantum-hydrodynamic picture of a free Gaussian packet.

Modules:

* :mod:`qshock.gaussian_packet` - closed-form packet fields, trajectories, force
* :mod:`qshock.quasilinear` - the (rho, u) quasilinear system and its eigenstructure
* :mod:`qshock.characteristics` - characteristic lines and shock detectors
* :mod:`qshock.riemann` - Riemann invariants and the traveling-wave form
* :mod:`qshock.oracle` - split-step Schrodinger evolution used as ground truth
* :mod:`qshock.cli` - the ``qshock`` command line
"""
__version__ = "0.1.0"

from .gaussian_packet import PacketParams  # noqa: E402,F401
