"""Decision procedures for dynamic logic of propositional assignments with
separation-style parallel composition."""
import sys

from .kernels import BACKEND as KERNEL_BACKEND

__all__ = ["KERNEL_BACKEND"]

# deep programs such as pi^{<=n} unroll into deeply nested trees
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__version__ = "0.1.0"
