# pylint: disable = unused-import, missing-docstring

from ._quadrature.core import GaussHermiteRule, gauss_expect, rule
