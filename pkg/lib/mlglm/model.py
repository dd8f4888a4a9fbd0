"""Model specifications and forward sampling of multi-layer generalised
linear models."""

# pylint: disable = unused-import

from ._model.activations import ACTIVATION_REGISTRY, ActivationSpec, SideInformation
from ._model.sampling import (
    Disorder,
    dims,
    empirical_rho,
    empirical_rho_layers,
    norm_variance_decay,
    sample_forward,
)
from ._model.spec import LayerSpec, ModelSpec, PriorSpec, RhoSequence
from ._recursion.core import compute_rho, layer_second_moment
