from .core import MAX_ORDER, MIN_ORDER, GaussHermiteRule, gauss_expect, rule
