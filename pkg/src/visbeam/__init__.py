"""Vision-aided beam management simulator with dataset tooling.

Submodules: ``linalg``, ``geometry``, ``channel``, ``beamforming``, ``music``,
``irs``, ``detector``, ``dataset``, ``blockage`` and ``scenario``.
"""

__version__ = "0.1.0"
