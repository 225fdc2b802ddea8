"""Low-rank tensor compression of IRS phase-shift feedback.

Library layout:

- :mod:`irsfb.tensor_ops` - tensorization, unfoldings, product kernels
- :mod:`irsfb.linalg` - complex SVD / pseudo-inverse with a fixed phase convention
- :mod:`irsfb.decomposition` - canonical (ALS) and multilinear (HOSVD) fits
- :mod:`irsfb.quantization` - phase and amplitude codebooks
- :mod:`irsfb.codec` - bit-exact feedback message encoding
- :mod:`irsfb.reconstruction` - controller-side phase vector rebuild
- :mod:`irsfb.channel` - Rician channels with geometric LOS steering
- :mod:`irsfb.system` - beamformers, feedback durations, SE/EE budgets
- :mod:`irsfb.harness` - seeded Monte-Carlo runner and CSV contract
- :mod:`irsfb.service` - FastAPI app; :mod:`irsfb.cli` - thin HTTP client
"""

__version__ = "0.1.0"
