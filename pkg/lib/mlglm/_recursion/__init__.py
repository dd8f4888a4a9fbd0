from .core import DEFAULT_ORDER, compute_rho, layer_second_moment
