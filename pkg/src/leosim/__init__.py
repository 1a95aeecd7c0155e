"""LEO satellite edge watermark-offloading simulator with a PPO scheduler."""
from .kernels import HAVE_COMPILED

__version__ = "0.1.0"
__all__ = ["HAVE_COMPILED", "__version__"]
